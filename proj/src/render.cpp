#include <algorithm>
#include <cmath>
#include <cstdio>

#include "simdeck/error.hpp"
#include "simdeck/render.hpp"

namespace simdeck {

namespace {

int round_half_up(double v) { return static_cast<int>(std::floor(v + 0.5)); }

struct Clip {
  int x0, y0, x1, y1;
  bool contains(int x, int y) const { return x >= x0 && x <= x1 && y >= y0 && y <= y1; }
};

void put(Image8& img, int x, int y, Rgb c, const Clip* clip = nullptr) {
  if (!img.contains(x, y) || (clip && !clip->contains(x, y))) return;
  img.at(x, y, 0) = c.r;
  img.at(x, y, 1) = c.g;
  img.at(x, y, 2) = c.b;
}

void line(Image8& img, int x0, int y0, int x1, int y1, Rgb c, const Clip* clip) {
  const int dx = std::abs(x1 - x0), sx = x0 < x1 ? 1 : -1;
  const int dy = -std::abs(y1 - y0), sy = y0 < y1 ? 1 : -1;
  int err = dx + dy;
  for (;;) {
    put(img, x0, y0, c, clip);
    if (x0 == x1 && y0 == y1) break;
    const int e2 = 2 * err;
    if (e2 >= dy) err += dy, x0 += sx;
    if (e2 <= dx) err += dx, y0 += sy;
  }
}

void marker(Image8& img, int cx, int cy, Marker m, int size, Rgb c, const Clip* clip) {
  const int r = std::max(0, size);
  switch (m) {
    case Marker::Dot:
      for (int y = -r / 2; y <= r / 2; ++y)
        for (int x = -r / 2; x <= r / 2; ++x) put(img, cx + x, cy + y, c, clip);
      break;
    case Marker::Square:
      for (int i = -r; i <= r; ++i) {
        put(img, cx + i, cy - r, c, clip);
        put(img, cx + i, cy + r, c, clip);
        put(img, cx - r, cy + i, c, clip);
        put(img, cx + r, cy + i, c, clip);
      }
      break;
    case Marker::Cross:
      for (int i = -r; i <= r; ++i) {
        put(img, cx + i, cy + i, c, clip);
        put(img, cx + i, cy - i, c, clip);
      }
      break;
    case Marker::Circle: {
      int x = r, y = 0, err = 1 - r;
      while (x >= y) {
        for (auto [px, py] : {std::pair{x, y}, {y, x}, {-y, x}, {-x, y}, {-x, -y}, {-y, -x}, {y, -x}, {x, -y}})
          put(img, cx + px, cy + py, c, clip);
        ++y;
        if (err < 0) {
          err += 2 * y + 1;
        } else {
          --x;
          err += 2 * (y - x) + 1;
        }
      }
      break;
    }
  }
}

std::string tick_label(double v) {
  if (std::abs(v) < 1e-12) v = 0.0;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

constexpr int kMarginLeft = 44, kMarginRight = 10, kMarginTop = 16, kMarginBottom = 22;

}  // namespace

void check_axis(const AxisLayout& a) {
  if (!(a.right > a.left) || !(a.bottom > a.top) || !(a.x_max > a.x_min) || !(a.y_max > a.y_min) ||
      !std::isfinite(a.x_max - a.x_min) || !std::isfinite(a.y_max - a.y_min))
    throw Error("bad axis");
}

Point data_from_pixel(Point px, const AxisLayout& a) {
  check_axis(a);
  return {a.x_min + (px.x - a.left) / (a.right - a.left) * (a.x_max - a.x_min),
          a.y_min + (a.bottom - px.y) / (a.bottom - a.top) * (a.y_max - a.y_min)};
}

Point pixel_from_data(Point d, const AxisLayout& a) {
  check_axis(a);
  return {a.left + (d.x - a.x_min) / (a.x_max - a.x_min) * (a.right - a.left),
          a.bottom - (d.y - a.y_min) / (a.y_max - a.y_min) * (a.bottom - a.top)};
}

Image8 to_rgb(const Image8& img) {
  if (img.channels == 3) return img;
  Image8 out(img.width, img.height, 3);
  for (std::size_t i = 0; i < img.data.size(); ++i)
    for (int c = 0; c < 3; ++c) out.data[3 * i + c] = img.data[i];
  return out;
}

void draw_line(Image8& img, int x0, int y0, int x1, int y1, Rgb color) { line(img, x0, y0, x1, y1, color, nullptr); }

// ---------------------------------------------------------------------------
// Scope

Scope::Scope(int width, int height, double t_min, double t_max, double v_min, double v_max)
    : buffer_(width, height, 1, 0),
      axis_{0, 0, static_cast<double>(width - 1), static_cast<double>(height - 1), t_min, t_max, v_min, v_max} {
  check_axis(axis_);
}

int Scope::column_of(double t) const {
  const double span = axis_.x_max - axis_.x_min;
  double off = std::fmod(t - axis_.x_min, span);
  if (off < 0) off += span;
  const int col = round_half_up(pixel_from_data({axis_.x_min + off, axis_.y_min}, axis_).x);
  return std::clamp(col, 0, buffer_.width - 1);
}

int Scope::row_of(double v) const {
  const double py = pixel_from_data({axis_.x_min, v}, axis_).y;
  return std::clamp(round_half_up(py), 0, buffer_.height - 1);
}

void Scope::clear() {
  std::fill(buffer_.data.begin(), buffer_.data.end(), 0);
  last_column_ = -1;
}

void Scope::set_data(double t, double v, double v_old, std::uint8_t gray) {
  if (!std::isfinite(v) || !std::isfinite(t)) return;
  const int w = buffer_.width;
  const int col = column_of(t);
  auto clear_column = [&](int c) {
    for (int y = 0; y < buffer_.height; ++y) buffer_.at(c, y) = 0;
  };
  if (col != last_column_) {
    int c = last_column_ < 0 ? 0 : (last_column_ + 1) % w;
    for (int n = 0; n < w; ++n) {
      clear_column(c);
      if (c == col) break;
      c = (c + 1) % w;
    }
    clear_column((col + 1) % w);
    last_column_ = col;
  }
  const int r1 = row_of(v);
  const int r0 = std::isfinite(v_old) ? row_of(v_old) : r1;
  for (int y = std::min(r0, r1); y <= std::max(r0, r1); ++y) buffer_.at(col, y) = gray;
}

// ---------------------------------------------------------------------------
// Figure

Figure::Figure(int width, int height, double x_min, double x_max, double y_min, double y_max)
    : Figure(width, height,
             AxisLayout{kMarginLeft, kMarginTop, static_cast<double>(width - 1 - kMarginRight),
                        static_cast<double>(height - 1 - kMarginBottom), x_min, x_max, y_min, y_max}) {}

Figure::Figure(int width, int height, const AxisLayout& axis) : width_(width), height_(height), axis_(axis) {
  check_axis(axis_);
  if (axis_.left < 0 || axis_.top < 0 || axis_.right >= width || axis_.bottom >= height) throw Error("bad axis");
}

void Figure::plot_line(const std::vector<double>& xs, const std::vector<double>& ys, Rgb color) {
  if (xs.empty() || xs.size() != ys.size()) return;
  Series s{Series::Line, {}, color, Marker::Dot, 1, {}};
  for (std::size_t i = 0; i < xs.size(); ++i) s.pts.push_back({xs[i], ys[i]});
  series_.push_back(std::move(s));
}

void Figure::plot_scatter(const std::vector<double>& xs, const std::vector<double>& ys, Marker m, Rgb color, int size) {
  if (xs.empty() || xs.size() != ys.size()) return;
  Series s{Series::Scatter, {}, color, m, size, {}};
  for (std::size_t i = 0; i < xs.size(); ++i) s.pts.push_back({xs[i], ys[i]});
  series_.push_back(std::move(s));
}

void Figure::plot_polyline(const std::vector<Point>& pts, Rgb color) {
  if (pts.empty()) return;
  series_.push_back({Series::Line, pts, color, Marker::Dot, 1, {}});
}

void Figure::label(Point at, std::string text, Rgb color) {
  series_.push_back({Series::Label, {at}, color, Marker::Dot, 1, std::move(text)});
}

Figure::Rendered Figure::render() const {
  Image8 img(width_, height_, 3, 255);
  const int l = round_half_up(axis_.left), t = round_half_up(axis_.top);
  const int r = round_half_up(axis_.right), b = round_half_up(axis_.bottom);

  line(img, l, t, r, t, kBlack, nullptr);
  line(img, l, b, r, b, kBlack, nullptr);
  line(img, l, t, l, b, kBlack, nullptr);
  line(img, r, t, r, b, kBlack, nullptr);
  for (int i = 0; x_ticks_ >= 2 && i < x_ticks_; ++i) {
    const double x = axis_.x_min + i * (axis_.x_max - axis_.x_min) / (x_ticks_ - 1);
    const int px = round_half_up(pixel_from_data({x, axis_.y_min}, axis_).x);
    line(img, px, b, px, b + 3, kBlack, nullptr);
    const auto s = tick_label(x);
    draw_text(img, px - text_width(s) / 2, b + 6, s, kBlack);
  }
  for (int i = 0; y_ticks_ >= 2 && i < y_ticks_; ++i) {
    const double y = axis_.y_min + i * (axis_.y_max - axis_.y_min) / (y_ticks_ - 1);
    const int py = round_half_up(pixel_from_data({axis_.x_min, y}, axis_).y);
    line(img, l - 3, py, l, py, kBlack, nullptr);
    const auto s = tick_label(y);
    draw_text(img, l - 5 - text_width(s), py - 3, s, kBlack);
  }
  if (!title_.empty()) draw_text(img, (width_ - text_width(title_)) / 2, 4, title_, kBlack);

  const Clip clip{l, t, r, b};
  auto to_px = [&](Point p) {
    const auto q = pixel_from_data(p, axis_);
    return std::pair{round_half_up(q.x), round_half_up(q.y)};
  };
  auto drawable = [](Point p) {
    // Keep coordinates well inside int range before rasterizing.
    return std::isfinite(p.x) && std::isfinite(p.y);
  };
  for (const auto& s : series_) {
    switch (s.kind) {
      case Series::Line:
        for (std::size_t i = 0; i < s.pts.size(); ++i) {
          if (!drawable(s.pts[i])) continue;
          auto [x1, y1] = to_px(s.pts[i]);
          if (i == 0 || !drawable(s.pts[i - 1])) {
            put(img, x1, y1, s.color, &clip);
            continue;
          }
          auto [x0, y0] = to_px(s.pts[i - 1]);
          const auto lim = [](int v) { return std::clamp(v, -100000, 100000); };
          line(img, lim(x0), lim(y0), lim(x1), lim(y1), s.color, &clip);
        }
        break;
      case Series::Scatter:
        for (const auto& p : s.pts) {
          if (!drawable(p)) continue;
          auto [x, y] = to_px(p);
          if (std::abs(x) > 100000 || std::abs(y) > 100000) continue;
          marker(img, x, y, s.marker, s.size, s.color, &clip);
        }
        break;
      case Series::Label: {
        if (!drawable(s.pts[0])) break;
        auto [x, y] = to_px(s.pts[0]);
        draw_text(img, x, y, s.text, s.color);
        break;
      }
    }
  }
  return {std::move(img), axis_};
}

}  // namespace simdeck
