#include "simdeck/cli.hpp"

#include <atomic>
#include <csignal>
#include <fstream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "simdeck/demos.hpp"
#include "simdeck/directive.hpp"
#include "simdeck/error.hpp"
#include "simdeck/render.hpp"
#include "simdeck/server.hpp"
#include "simdeck/store.hpp"

namespace simdeck {

namespace {

std::atomic<bool> g_interrupted{false};

extern "C" void on_signal(int) { g_interrupted = true; }

struct HostArgs {
  std::string demo;
  std::string db;
  int port = protocol::kDefaultPort;
  std::string address = "127.0.0.1";
  std::string web_root;
  bool headless = false;
  int steps = 0;
  std::string png_dir;
};

struct ParseArgs {
  std::string file;
  std::string db;
  bool overwrite = false;
};

std::string widget_name(const WidgetCollection& c, int id) {
  const auto ref = resolve_widget_id(c, id);
  if (!ref) return std::to_string(id);
  switch (ref->table) {
    case WidgetTable::Parameter: return c.pwidgets[ref->index].name;
    case WidgetTable::Data: return c.dwidgets[ref->index].name;
    case WidgetTable::Comment: return c.comments[ref->index].name;
  }
  return std::to_string(id);
}

int run_headless(Engine& engine, const HostArgs& a, std::ostream& out) {
  engine.execute(Command::Parse);
  engine.execute(Command::Save);
  engine.execute(Command::Init);
  for (int i = 0; i < a.steps; ++i) engine.execute(Command::Step);
  const auto frame = engine.last_frame();
  out << "step=" << engine.step_count() << "\n";
  if (!frame) return 0;
  for (const auto& [id, text] : frame->texts) out << "[" << widget_name(engine.collection(), id) << "]\n" << text << "\n";
  if (!a.png_dir.empty()) {
    std::filesystem::create_directories(a.png_dir);
    for (const auto& [id, img] : frame->images) {
      const auto path = std::filesystem::path(a.png_dir) / (widget_name(engine.collection(), id) + ".png");
      write_png(path, img);
      out << "wrote " << path.string() << "\n";
    }
  }
  return 0;
}

int run_server(Engine& engine, const HostArgs& a, const std::filesystem::path& db, std::ostream& out) {
  ServerOptions opts;
  opts.address = a.address;
  opts.port = static_cast<std::uint16_t>(a.port);
  if (!a.web_root.empty())
    opts.web_root = a.web_root;
  else if (std::filesystem::is_directory("web-ui/dist"))
    opts.web_root = "web-ui/dist";
  Server server(engine, opts);
  engine.execute(Command::Parse);
  engine.start();
  server.start();
  out << "serving " << a.demo << " on http://" << a.address << ":" << server.port() << "/ (db " << db.string()
      << ")" << std::endl;

  g_interrupted = false;
  auto prev_int = std::signal(SIGINT, on_signal);
  auto prev_term = std::signal(SIGTERM, on_signal);
  std::atomic<bool> done{false};
  std::thread watcher([&] {
    while (!done) {
      if (g_interrupted.exchange(false)) engine.post(Command::Quit);
      std::this_thread::sleep_for(std::chrono::milliseconds(100));
    }
  });
  engine.wait_quit();
  done = true;
  watcher.join();
  std::signal(SIGINT, prev_int);
  std::signal(SIGTERM, prev_term);
  server.stop();
  engine.shutdown();
  return 0;
}

int host(const HostArgs& a, std::ostream& out, std::ostream& err) {
  auto sim = make_demo(a.demo);
  if (!sim) {
    err << "unknown demo '" << a.demo << "' (see list-demos)\n";
    return 2;
  }
  if (a.headless && a.steps < 0) {
    err << "--steps must be >= 0\n";
    return 2;
  }
  const auto db = default_db_path(a.demo, a.db.empty() ? std::nullopt : std::optional<std::filesystem::path>(a.db));
  if (db.has_parent_path()) std::filesystem::create_directories(db.parent_path());
  Engine engine(std::move(sim), Store::open(db));
  return a.headless ? run_headless(engine, a, out) : run_server(engine, a, db, out);
}

int parse_file(const ParseArgs& a, std::ostream& out) {
  std::ifstream in(a.file, std::ios::binary);
  if (!in) throw Error("read failed", a.file);
  std::stringstream buf;
  buf << in.rdbuf();
  const auto specs = parse_source(buf.str());
  const auto db = default_db_path(a.file, a.db.empty() ? std::nullopt : std::optional<std::filesystem::path>(a.db));
  if (db.has_parent_path()) std::filesystem::create_directories(db.parent_path());
  Store store = Store::open(db);
  const std::string ctx = context_of(specs).value_or(std::string(kDefaultContext));
  WidgetCollection coll;
  if (store.has_context(ctx)) {
    coll = store.load_collection(ctx);
  } else {
    coll.context.name = ctx;
  }
  coll.context.app_name = std::filesystem::path(a.file).stem().string();
  const auto report = merge_into_collection(specs, coll, {!a.overwrite});
  store.save_collection(coll);
  out << "context " << report.context << ": created " << report.created << ", updated " << report.updated
      << ", unchanged " << report.unchanged << " (db " << db.string() << ")\n";
  return 0;
}

}  // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Host interactive simulations behind a browser control panel"};
  app.require_subcommand(1);

  HostArgs h;
  auto* host_cmd = app.add_subcommand("host", "run a registered demo");
  host_cmd->add_option("demo", h.demo, "demo name")->required();
  host_cmd->add_option("dbfile", h.db, "parameter database (default <demo>.db)");
  host_cmd->add_option("--port", h.port, "listen port, 0 picks a free one")->check(CLI::Range(0, 65535));
  host_cmd->add_option("--address", h.address, "listen address");
  host_cmd->add_option("--web-root", h.web_root, "directory with the web client bundle");
  host_cmd->add_flag("--headless", h.headless, "parse, init and step without serving");
  host_cmd->add_option("--steps", h.steps, "steps to run when headless");
  host_cmd->add_option("--png-dir", h.png_dir, "write final images as PNG files (headless)");

  auto* list_cmd = app.add_subcommand("list-demos", "print registered demos");

  ParseArgs p;
  auto* parse_cmd = app.add_subcommand("parse", "merge a source file's directives into a database");
  parse_cmd->add_option("file", p.file, "source file with directive comments")->required();
  parse_cmd->add_option("--db", p.db, "database path (default <file>.db)");
  parse_cmd->add_flag("--overwrite", p.overwrite, "replace stored geometry and values");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return 2;
  }

  try {
    if (host_cmd->parsed()) return host(h, out, err);
    if (list_cmd->parsed()) {
      for (const auto& d : demo_registry()) out << d.name << "\t" << d.summary << "\n";
      return 0;
    }
    if (parse_cmd->parsed()) return parse_file(p, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace simdeck
