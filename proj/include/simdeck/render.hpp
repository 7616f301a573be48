#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "simdeck/automaton.hpp"
#include "simdeck/image.hpp"

// Raster plotting without an external plotting library.
namespace simdeck {

/// Pixel rectangle plus the data ranges it shows. The mapping is inclusive:
/// x_min sits on column `left`, x_max on column `right`; y is flipped so
/// y_min sits on row `bottom`.
struct AxisLayout {
  double left = 0, top = 0, right = 1, bottom = 1;
  double x_min = 0, x_max = 1, y_min = 0, y_max = 1;

  bool operator==(const AxisLayout&) const = default;
};

/// Both throw Error("bad axis") for a degenerate layout.
Point data_from_pixel(Point px, const AxisLayout& axis);
Point pixel_from_data(Point data, const AxisLayout& axis);
void check_axis(const AxisLayout& axis);

struct Rgb {
  std::uint8_t r = 0, g = 0, b = 0;

  bool operator==(const Rgb&) const = default;
};

inline constexpr Rgb kBlack{0, 0, 0};
inline constexpr Rgb kWhite{255, 255, 255};
inline constexpr Rgb kRed{220, 30, 30};
inline constexpr Rgb kBlue{30, 60, 220};
inline constexpr Rgb kCyan{0, 200, 220};
inline constexpr Rgb kGreen{20, 160, 40};
inline constexpr Rgb kGray{128, 128, 128};

// ---------------------------------------------------------------------------
// Sweep oscilloscope

class Scope {
 public:
  /// Gray buffer of width x height, background 0. Throws "bad axis".
  Scope(int width, int height, double t_min, double t_max, double v_min, double v_max);

  /// Draws a vertical run from v_old's row to v's row at t's column.
  /// t wraps modulo the window; columns swept over since the previous call,
  /// plus one column ahead, are cleared first. Non-finite v is skipped;
  /// non-finite v_old draws just the point.
  void set_data(double t, double v, double v_old, std::uint8_t gray = 255);

  int column_of(double t) const;
  int row_of(double v) const;
  void clear();

  const Image8& image() const { return buffer_; }
  const AxisLayout& axis() const { return axis_; }

 private:
  Image8 buffer_;
  AxisLayout axis_;
  int last_column_ = -1;
};

// ---------------------------------------------------------------------------
// Figures

enum class Marker { Dot, Square, Cross, Circle };

/// Draws text with the built-in 5x7 font; (x, y) is the top-left corner.
/// Each glyph advances 6 * scale pixels. Unknown characters draw a box.
void draw_text(Image8& img, int x, int y, std::string_view text, Rgb color, int scale = 1);
int text_width(std::string_view text, int scale = 1);

void draw_line(Image8& img, int x0, int y0, int x1, int y1, Rgb color);

class Figure {
 public:
  /// Plot rect inset from the buffer edges by fixed margins. Throws "bad axis".
  Figure(int width, int height, double x_min, double x_max, double y_min, double y_max);
  Figure(int width, int height, const AxisLayout& axis);

  void set_title(std::string title) { title_ = std::move(title); }
  void set_ticks(int nx, int ny) { x_ticks_ = nx, y_ticks_ = ny; }

  /// Empty or mismatched series are ignored. Non-finite points break lines.
  void plot_line(const std::vector<double>& xs, const std::vector<double>& ys, Rgb color);
  void plot_scatter(const std::vector<double>& xs, const std::vector<double>& ys, Marker marker, Rgb color,
                    int size = 3);
  void plot_polyline(const std::vector<Point>& pts, Rgb color);
  /// Text anchored at a data position.
  void label(Point at, std::string text, Rgb color);

  const AxisLayout& axis() const { return axis_; }

  struct Rendered {
    Image8 image;  ///< RGB
    AxisLayout axis;
  };
  Rendered render() const;

 private:
  struct Series {
    enum Kind { Line, Scatter, Label } kind;
    std::vector<Point> pts;
    Rgb color;
    Marker marker = Marker::Dot;
    int size = 3;
    std::string text;
  };

  int width_, height_;
  AxisLayout axis_;
  std::string title_;
  int x_ticks_ = 5, y_ticks_ = 5;
  std::vector<Series> series_;
};

// ---------------------------------------------------------------------------
// Zero level set

/// Marching squares over grid (width = columns along x, height = rows along
/// y, row 0 at y_min) spanning the axis' data ranges with inclusive
/// endpoints. Polylines are in data coordinates; closed loops repeat their
/// first vertex at the end. Ordering follows a row-major cell scan.
std::vector<std::vector<Point>> contour_zero(const ImageBuffer& grid, const AxisLayout& axis, double level = 0.0);

// ---------------------------------------------------------------------------
// Export

/// 1- or 3-channel 8-bit PNG. Throws Error("write failed").
void write_png(const std::filesystem::path& path, const Image8& img);
/// Throws Error("read failed"). Used by tests and tools.
Image8 read_png(const std::filesystem::path& path);

/// Gray to RGB by replication; RGB passes through.
Image8 to_rgb(const Image8& img);

}  // namespace simdeck
