#include <fstream>
#include <random>
#include <thread>

#include "doctest.h"
#include "simdeck/error.hpp"
#include "simdeck/protocol.hpp"
#include "simdeck/server.hpp"
#include "support.hpp"
#include "ws_client.hpp"

using namespace simdeck;
using namespace simdeck::protocol;
using testsupport::error_code_of;
using testsupport::TempDir;
using testsupport::WsClient;
using testsupport::WsMessage;
using nlohmann::json;

namespace {

std::vector<std::uint8_t> bytes(std::initializer_list<int> b) {
  std::vector<std::uint8_t> out;
  for (int v : b) out.push_back(static_cast<std::uint8_t>(v));
  return out;
}

// Every data field carries the step counter, so frames can be checked for
// tearing on the client side. Widget ids: A=1, Canvas=2, Swatch=3, Out=4.
class Painter : public Simulation {
 public:
  explicit Painter(int side = 8) : side_(side) {}
  std::string name() const override { return "painter"; }
  std::string directives() const override {
    return "#@IVISIT:SIMULATION & painter\n"
           "#@IVISIT:SLIDER & A & [200,1] & [0,10,5,0.5] & a & -1 & float & 1\n"
           "#@IVISIT:IMAGE & Canvas & 1.0 & [0,255] & img & int\n"
           "#@IVISIT:IMAGE & Swatch & 1.0 & [0,255] & swatch & int\n"
           "#@IVISIT:TEXT_OUT & Out & [20,2] & just_left & txt\n";
  }
  void declare(FieldRegistry& f) override {
    f.param("a", a);
    f.data("img", img);
    f.data("swatch", swatch);
    f.data("txt", txt);
  }
  void init() override {
    n = 0;
    paint();
  }
  void step() override {
    ++n;
    paint();
  }
  void paint() {
    img = Image8(side_, side_, 1);
    for (auto& v : img.data) v = static_cast<std::uint8_t>(n % 256);
    swatch = Image8(2, 1, 3);
    for (auto& v : swatch.data) v = static_cast<std::uint8_t>(n % 256);
    txt = "step=" + std::to_string(n) + " a=" + std::to_string(a);
  }

  double a = 0;
  Image8 img, swatch;
  std::string txt;
  std::uint64_t n = 0;

 private:
  int side_;
};

struct Host {
  TempDir dir;
  std::unique_ptr<Engine> engine;
  std::unique_ptr<Server> server;

  explicit Host(int side = 8, ServerOptions opts = {}, std::filesystem::path db = {}) {
    if (db.empty()) db = dir / "painter.db";
    engine = std::make_unique<Engine>(std::make_unique<Painter>(side), Store::open(db));
    engine->start();
    opts.port = 0;
    server = std::make_unique<Server>(*engine, opts);
    server->start();
  }
  ~Host() {
    server->stop();
    engine->shutdown();
  }
  std::uint16_t port() const { return server->port(); }
};

json action(const std::string& cmd) { return {{"type", "action"}, {"cmd", cmd}}; }

}  // namespace

// ---------------------------------------------------------------------------
// Binary frames

TEST_CASE("golden frame: 1x1 RGB") {
  Image8 img(1, 1, 3);
  img.data = {255, 0, 0};
  CHECK(encode_image_frame(7, img) ==
        bytes({'I', 'V', 'I', 'M', 1, 7, 0, 0, 0, 1, 0, 1, 0, 3, 0, 0, 0xFF, 0x00, 0x00}));
}

TEST_CASE("golden frame: 4x2 gray") {
  Image8 img(4, 2, 1);
  for (std::size_t i = 0; i < 8; ++i) img.data[i] = static_cast<std::uint8_t>(10 * i);
  const auto b = encode_image_frame(3, img);
  CHECK(b == bytes({'I', 'V', 'I', 'M', 1, 3, 0, 0, 0, 4, 0, 2, 0, 1, 0, 0, 0, 10, 20, 30, 40, 50, 60, 70}));
  CHECK(b.size() == kFrameHeaderSize + 8);
}

TEST_CASE("multi-byte header fields are little-endian") {
  Image8 img(300, 2, 1);
  const auto b = encode_image_frame(0x01020304u, img);
  CHECK(b[5] == 0x04);
  CHECK(b[8] == 0x01);
  CHECK(b[9] == (300 & 0xFF));
  CHECK(b[10] == (300 >> 8));
}

TEST_CASE("property: decode inverts encode for random buffers") {
  std::mt19937_64 rng(99);
  for (int k = 0; k < 100; ++k) {
    const int w = 1 + static_cast<int>(rng() % 64), h = 1 + static_cast<int>(rng() % 64);
    const int ch = rng() % 2 ? 3 : 1;
    Image8 img(w, h, ch);
    for (auto& v : img.data) v = static_cast<std::uint8_t>(rng());
    const auto id = static_cast<std::uint32_t>(rng());
    const auto f = decode_image_frame(encode_image_frame(id, img));
    CHECK(f.widget_id == id);
    CHECK(f.image == img);
  }
}

TEST_CASE("oversized or malformed frames are rejected") {
  CHECK(error_code_of([] { encode_image_frame(1, Image8(65536, 1, 1)); }) == "frame too large");
  CHECK(error_code_of([] { encode_image_frame(1, Image8(1, 65536, 1)); }) == "frame too large");
  CHECK(error_code_of([] { encode_image_frame(1, Image8(65535, 1, 1)); }).empty());
  CHECK(error_code_of([] { encode_image_frame(1, Image8(2, 2, 4)); }) == "bad frame");

  Image8 img(2, 2, 1);
  const auto good = encode_image_frame(1, img);
  auto mutate = [&](std::size_t at, int v) {
    auto b = good;
    b[at] = static_cast<std::uint8_t>(v);
    return error_code_of([&] { decode_image_frame(b); });
  };
  CHECK(mutate(0, 'X') == "bad frame");
  CHECK(mutate(4, 2) == "bad frame");
  CHECK(mutate(13, 2) == "bad frame");
  CHECK(mutate(14, 1) == "bad frame");
  CHECK(error_code_of([&] { decode_image_frame(std::span(good).first(10)); }) == "bad frame");
  CHECK(error_code_of([&] { decode_image_frame(std::span(good).first(good.size() - 1)); }) == "bad frame");
}

// ---------------------------------------------------------------------------
// JSON messages

TEST_CASE("client messages parse into engine inputs") {
  CHECK(std::get<Command>(parse_client_message(R"({"type":"action","cmd":"run"})")) == Command::Run);
  const auto sp = std::get<SetParam>(parse_client_message(R"({"type":"set_param","widget_id":2,"value":0.5})"));
  CHECK(sp.widget_id == 2);
  CHECK(std::get<double>(sp.value.value) == 0.5);
  CHECK(sp.value.item.empty());
  const auto si =
      std::get<SetParam>(parse_client_message(R"({"type":"set_param","widget_id":1,"value":"x","item":"I0"})"));
  CHECK(std::get<std::string>(si.value.value) == "x");
  CHECK(si.value.item == "I0");
  const auto p = std::get<Pointer>(
      parse_client_message(R"({"type":"pointer","widget_id":4,"kind":"move","button":3,"x_px":1.5,"y_px":7})"));
  CHECK(p.widget_id == 4);
  CHECK(p.event.kind == PointerKind::Move);
  CHECK(p.event.button == 3);
  CHECK(p.event.pos.x == 1.5);
  CHECK(p.event.pos.y == 7);
  const auto g = std::get<SetGeometry>(parse_client_message(R"({"type":"set_geometry","widget_id":1,"x":40,"y":80})"));
  CHECK(g.geometry == Geometry{40, 80});
  CHECK(std::get<SelectContext>(parse_client_message(R"({"type":"select_context","name":"N.N."})")).name == "N.N.");
}

TEST_CASE("client messages round trip through their JSON form") {
  const std::vector<Input> inputs = {
      Command::Save,
      SetParam{3, UiValue{2.5, ""}},
      SetParam{1, UiValue{std::string("B"), "k"}},
      Pointer{4, PointerEvent{PointerKind::Release, 2, {3.25, 4}}},
      SetGeometry{5, Geometry{-1, 9}},
      SelectContext{"ctx"},
  };
  for (const auto& in : inputs) {
    const auto back = parse_client_message(client_message(in).dump());
    CHECK(client_message(back) == client_message(in));
  }
}

TEST_CASE("malformed client messages are bad_message; unknown actions are bad command") {
  for (const char* m : {"not json", "[1,2]", "{}", R"({"type":"dance"})", R"({"type":7})",
                        R"({"type":"set_param","value":1})", R"({"type":"set_param","widget_id":"1","value":1})",
                        R"({"type":"set_param","widget_id":1,"value":{"a":1}})", R"({"type":"set_param","widget_id":1.5,"value":1})",
                        R"({"type":"pointer","widget_id":1,"kind":"hover","x_px":0,"y_px":0})",
                        R"({"type":"pointer","widget_id":1,"kind":"press","x_px":0})",
                        R"({"type":"set_geometry","widget_id":1,"x":1})", R"({"type":"action"})"}) {
    CAPTURE(m);
    CHECK(error_code_of([&] { parse_client_message(m); }) == "bad_message");
  }
  CHECK(error_code_of([] { parse_client_message(R"({"type":"action","cmd":"jump"})"); }) == "bad command");
}

TEST_CASE("layout and frame_meta messages") {
  TempDir dir;
  Engine e(std::make_unique<Painter>(), Store::open(dir / "p.db"));
  e.execute(Command::Parse);
  e.execute(Command::Init);
  const auto j = layout_message(*e.layout());
  CHECK(j["type"] == "layout");
  CHECK(j["context"] == "painter");
  REQUIRE(j["widgets"].size() == 4);
  CHECK(j["widgets"][0]["id"] == 1);
  CHECK(j["widgets"][0]["kind"] == "SLIDER");
  CHECK(j["widgets"][0]["value"] == 1.0);
  CHECK(j["widgets"][0]["geometry"]["x"].is_number());
  CHECK(j["widgets"][1]["kind"] == "IMAGE");
  CHECK(j["widgets"][3]["kind"] == "TEXT_OUT");
  CHECK(j["widgets"][3]["id"] == 4);

  const auto m = frame_meta_message(*e.last_frame());
  CHECK(m["type"] == "frame_meta");
  CHECK(m["step"] == 0);
  CHECK(m["images"] == json::array({2, 3}));
  CHECK(m["texts"][0]["id"] == 4);
  CHECK(m["params"][0]["id"] == 1);

  CHECK(error_message("bad_message", "x") == json{{"type", "error"}, {"code", "bad_message"}, {"detail", "x"}});
  CHECK(report_message({{"action", "save"}})["type"] == "report");
}

// ---------------------------------------------------------------------------
// Server

TEST_CASE("first message after connect is the layout") {
  Host h;
  WsClient c(h.port());
  const auto m = c.read();
  REQUIRE(m);
  CHECK(m->type() == "layout");
  CHECK(m->json()["context"] == "N.N.");
  c.send(action("parse"));
  const auto l = c.read_until("layout");
  REQUIRE(l);
  CHECK(l->json()["context"] == "painter");
  CHECK(l->json()["widgets"].size() == 4);
  const auto r = c.read_until("report");
  REQUIRE(r);
  CHECK(r->json()["action"] == "parse");
}

TEST_CASE("static HTTP serving") {
  TempDir web;
  std::ofstream(web / "index.html") << "<p>bundle</p>";
  std::ofstream(web / "app.js") << "console.log(1)";
  ServerOptions opts;
  opts.web_root = web.path();
  Host h(8, opts);
  auto r = testsupport::http_get(h.port(), "/");
  CHECK(r.result_int() == 200);
  CHECK(r.body() == "<p>bundle</p>");
  r = testsupport::http_get(h.port(), "/app.js?v=2");
  CHECK(r.result_int() == 200);
  CHECK(std::string(r[testsupport::http::field::content_type]) == "text/javascript");
  CHECK(testsupport::http_get(h.port(), "/missing.css").result_int() == 404);
  CHECK(testsupport::http_get(h.port(), "/../secret").result_int() == 400);
}

TEST_CASE("without a web root a placeholder page is served") {
  Host h;
  const auto r = testsupport::http_get(h.port(), "/");
  CHECK(r.result_int() == 200);
  CHECK(r.body().find("/ws") != std::string::npos);
}

TEST_CASE("a taken port is reported") {
  Host h;
  TempDir dir;
  Engine e(std::make_unique<Painter>(), Store::open(dir / "q.db"));
  ServerOptions opts;
  opts.port = h.port();
  Server s(e, opts);
  CHECK(error_code_of([&] { s.start(); }) == "port in use");
}

TEST_CASE("malformed messages get bad_message and the connection stays open") {
  Host h;
  WsClient c(h.port());
  REQUIRE(c.read());
  c.send_text("{{{");
  auto m = c.read_until("error");
  REQUIRE(m);
  CHECK(m->json()["code"] == "bad_message");
  c.send_binary("IVIM");
  m = c.read_until("error");
  REQUIRE(m);
  CHECK(m->json()["code"] == "bad_message");
  c.send(action("parse"));
  CHECK(c.read_until("report"));
}

TEST_CASE("engine errors reach the client") {
  Host h;
  WsClient c(h.port());
  REQUIRE(c.read());
  c.send(action("step"));
  auto m = c.read_until("error");
  REQUIRE(m);
  CHECK(m->json()["code"] == "not initialized");
  c.send({{"type", "set_param"}, {"widget_id", 99}, {"value", 1}});
  m = c.read_until("error");
  REQUIRE(m);
  CHECK(m->json()["code"] == "unknown widget");
}

TEST_CASE("two clients see one client's slider change") {
  Host h;
  WsClient a(h.port()), b(h.port());
  REQUIRE(a.read());
  REQUIRE(b.read());
  a.send(action("parse"));
  a.send(action("init"));
  REQUIRE(b.read_until("report"));
  a.send({{"type", "set_param"}, {"widget_id", 1}, {"value", 7.2}});
  bool seen = false;
  const auto until = std::chrono::steady_clock::now() + std::chrono::seconds(5);
  while (!seen && std::chrono::steady_clock::now() < until) {
    const auto m = b.read_until("frame_meta");
    REQUIRE(m);
    const json meta = m->json();
    for (const auto& p : meta["params"])
      if (p["id"] == 1 && p["value"] == 7.0) seen = true;
  }
  CHECK(seen);
}

TEST_CASE("frames stay coherent and metadata is never dropped for a slow reader") {
  Host h(256);  // 64 KiB images fill socket buffers quickly
  WsClient c(h.port());
  REQUIRE(c.read());
  c.send(action("parse"));
  c.send(action("init"));
  REQUIRE(c.read_until("report"));
  const auto first = c.read_until("frame_meta");
  REQUIRE(first);
  c.send(action("run"));
  std::this_thread::sleep_for(std::chrono::milliseconds(300));  // not reading
  c.send(action("stop"));

  std::optional<std::uint64_t> meta_step = first->json()["step"].get<std::uint64_t>();
  std::uint64_t metas = 0, images = 0;
  bool contiguous = true, coherent = true;
  const auto until = std::chrono::steady_clock::now() + std::chrono::seconds(20);
  std::uint64_t stop_step = 0;
  while (std::chrono::steady_clock::now() < until) {
    auto m = c.read(std::chrono::milliseconds(1500));
    if (!m) break;
    if (m->binary) {
      const auto f = decode_image_frame(std::span(reinterpret_cast<const std::uint8_t*>(m->data.data()), m->data.size()));
      ++images;
      if (!meta_step || f.image.data.empty() || f.image.data[0] != *meta_step % 256) coherent = false;
      continue;
    }
    const auto j = m->json();
    if (j["type"] != "frame_meta") continue;
    const auto s = j["step"].get<std::uint64_t>();
    if (meta_step && s != *meta_step + 1) contiguous = false;
    meta_step = s;
    ++metas;
    stop_step = s;
    if (s == h.engine->step_count() && !h.engine->running()) break;
  }
  CHECK(metas > 10);
  CHECK(contiguous);
  CHECK(coherent);
  CHECK(images <= 2 * metas);
  CHECK(stop_step == h.engine->step_count());
  MESSAGE("metas=" << metas << " images=" << images);
}

TEST_CASE("geometry edits survive save and reconnect") {
  TempDir dir;
  const auto db = dir / "painter.db";
  {
    Host h(8, {}, db);
    WsClient c(h.port());
    REQUIRE(c.read());
    c.send(action("parse"));
    c.send({{"type", "set_geometry"}, {"widget_id", 1}, {"x", 40}, {"y", 80}});
    c.send(action("save"));
    const auto r = c.read_until("report", [](const WsMessage&) {});
    REQUIRE(r);
    REQUIRE(c.read_until("report"));  // save follows the parse report
    WsClient again(h.port());
    const auto l = again.read();
    REQUIRE(l);
    CHECK(l->json()["widgets"][0]["geometry"] == json{{"x", 40}, {"y", 80}});
  }
  // A fresh host on the same database starts from the saved context.
  Host h2(8, {}, db);
  WsClient c(h2.port());
  const auto l = c.read();
  REQUIRE(l);
  CHECK(l->json()["context"] == "painter");
  CHECK(l->json()["widgets"][0]["geometry"] == json{{"x", 40}, {"y", 80}});
}

TEST_CASE("quit sends a final frame and closes connections") {
  Host h;
  WsClient c(h.port());
  REQUIRE(c.read());
  c.send(action("parse"));
  c.send(action("init"));
  c.send(action("quit"));
  std::optional<WsMessage> last_meta;
  while (auto m = c.read(std::chrono::seconds(3)))
    if (!m->binary && m->type() == "frame_meta") last_meta = m;
  REQUIRE(last_meta);
  CHECK(last_meta->json()["step"] == 0);
  h.engine->wait_quit();
}
