#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "simdeck/engine.hpp"
#include "simdeck/image.hpp"

// Wire format shared by the server and its clients.
namespace simdeck::protocol {

inline constexpr std::uint16_t kDefaultPort = 8008;
inline constexpr std::size_t kFrameHeaderSize = 16;
inline constexpr std::uint8_t kFrameVersion = 1;

/// "IVIM", version, u32 LE widget id, u16 LE width, u16 LE height,
/// u8 channels, two zero bytes, then row-major samples.
/// Errors: "frame too large" (side > 65535), "bad frame" (channels not 1/3
/// or a buffer size that does not match).
std::vector<std::uint8_t> encode_image_frame(std::uint32_t widget_id, const Image8& img);

struct ImageFrame {
  std::uint32_t widget_id = 0;
  Image8 image;
};
/// Throws Error("bad frame").
ImageFrame decode_image_frame(std::span<const std::uint8_t> bytes);

/// Client text message to an engine input. Throws Error("bad_message") for
/// malformed JSON or fields, Error("bad command") for an unknown action.
Input parse_client_message(std::string_view text);
/// Inverse of parse_client_message, used by scripted clients.
nlohmann::json client_message(const Input& input);

nlohmann::json layout_message(const Layout& layout);
/// Image ids listed here are sent as binary frames right after this message.
nlohmann::json frame_meta_message(const Frame& frame);
nlohmann::json error_message(std::string_view code, std::string_view detail);
nlohmann::json report_message(const nlohmann::json& report);

}  // namespace simdeck::protocol
