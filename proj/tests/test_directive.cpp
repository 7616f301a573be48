#include <doctest.h>

#include <random>

#include "simdeck/directive.hpp"
#include "simdeck/error.hpp"
#include "support.hpp"

using namespace simdeck;
using testsupport::error_code_of;

namespace {

WidgetSpec one(const std::string& line) {
  auto specs = parse_source(line);
  REQUIRE(specs.size() == 1);
  return specs.front();
}

ParamWidgetSpec pw(const WidgetSpec& s) { return std::get<ParamWidgetSpec>(s); }
DataWidgetSpec dw(const WidgetSpec& s) { return std::get<DataWidgetSpec>(s); }

std::string parse_error(const std::string& src, int* line = nullptr) {
  try {
    parse_source(src);
  } catch (const ParseError& e) {
    if (line) *line = e.line();
    return e.code();
  }
  return {};
}

}  // namespace

TEST_CASE("scan_source keeps order and skips code") {
  const std::string src =
      "x = 1\n"
      "#@IVISIT:SLIDER & a & [200,1] & [0,9,3,1] & va & -1 & int & 0\n"
      "def step(): pass\n"
      "   #@IVISIT:SLIDER & b & [200,1] & [0,9,3,1] & vb & -1 & int & 0\n";
  const auto ds = scan_source(src);
  REQUIRE(ds.size() == 2);
  CHECK(ds[0].fields[0] == "a");
  CHECK(ds[0].line_no == 2);
  CHECK(ds[1].fields[0] == "b");
  CHECK(ds[1].line_no == 4);
  CHECK(scan_source("").empty());
}

TEST_CASE("directives inside host comments are found") {
  for (const char* prefix : {"// ", "# ", "-- ", "/* ", " * ", "; ", "% "}) {
    const auto ds = scan_source(std::string(prefix) + "#@IVISIT:SIMULATION & ctx");
    REQUIRE(ds.size() == 1);
    CHECK(ds[0].keyword == DirectiveKeyword::Simulation);
  }
  CHECK(scan_source("x = '#@IVISIT:SIMULATION & ctx'").empty());
}

TEST_CASE("orphan DICTSLIDERITEM is an error at its line") {
  int line = 0;
  CHECK(parse_error("\n#@IVISIT:DICTSLIDERITEM & Item1 & [0,9,3,1] & item1 & int & 3", &line) == "orphan item");
  CHECK(line == 2);
  CHECK(parse_error("#@IVISIT:SIMULATION & s\n#@IVISIT:DICTSLIDERITEM & I & [0,9,3,1] & i & int & 3") == "orphan item");
}

TEST_CASE("SLIDER example") {
  const auto& s = pw(one("#@IVISIT:SLIDER & name & [200,1] & [0,9,3,1] & var & -1 & int & 0"));
  const ParameterWidgetDef expected{"name", {0, 0}, SliderConfig{200, 1, 0.0, 9.0, 3, 1.0, ValueType::Int}, "var", -1};
  CHECK(s.widget == expected);
  CHECK(s.parameter == ParameterDef{"var", ParamKind::Int, std::int64_t{0}, -1});
}

TEST_CASE("DICTSLIDER example with two items") {
  const auto& s = pw(one(
      "#@IVISIT:DICTSLIDER & ParDict & [200,20,-1,2,10] & dict_par & 0\n"
      "#@IVISIT:DICTSLIDERITEM & Item1 & [0, 9,3,1] & item1 & int & 3\n"
      "#@IVISIT:DICTSLIDERITEM & Item2 & [0,30,4,2] & item2 & float & .5\n"));
  const auto& c = std::get<DictSliderConfig>(s.widget.config);
  CHECK(s.widget.name == "ParDict");
  CHECK(s.widget.target == "dict_par");
  CHECK(c.width == 200);
  CHECK(c.columns == 20);
  CHECK(c.rows == -1);
  CHECK(c.display_mode == 2);
  CHECK(c.font_size == 10);
  CHECK(c.selected == 0);
  REQUIRE(c.items.size() == 2);
  CHECK(c.items[0] == DictSliderItem{"Item1", 0, 9, 3, 1, "item1", ValueType::Int});
  CHECK(c.items[1] == DictSliderItem{"Item2", 0, 30, 4, 2, "item2", ValueType::Float});
  const auto& g = std::get<KeyedGroup>(s.parameter.value);
  CHECK(g == KeyedGroup{{{"item1", std::int64_t{3}}, {"item2", 0.5}}});
}

TEST_CASE("DICTSLIDER without items is rejected") {
  CHECK(parse_error("#@IVISIT:DICTSLIDER & D & [200,20,-1,2,10] & d & 0") == "dictslider without items");
}

TEST_CASE("TEXT_IN, LISTSEL, CHECKBOX, RADIOBUTTON, BUTTON examples") {
  const auto& t = pw(one("#@IVISIT:TEXT_IN & name & [20,5] & strvar & -1 & InitialText"));
  CHECK(t.widget == ParameterWidgetDef{"name", {}, TextInConfig{20, 5}, "strvar", -1});
  CHECK(t.parameter.value == ParamValue{std::string("InitialText")});

  const auto& l = pw(one("#@IVISIT:LISTSEL & name &[20,5] & [A,B,C] & var & -1 & string & A"));
  CHECK(l.widget == ParameterWidgetDef{"name", {}, ListSelConfig{20, 5, {"A", "B", "C"}, ValueType::String}, "var", -1});
  CHECK(l.parameter.value == ParamValue{std::string("A")});

  const auto& c = pw(one("#@IVISIT:CHECKBOX & name & [AA,BB,CC,DD] & strvar & 0110"));
  const auto& items = std::get<CheckboxConfig>(c.widget.config).items;
  const auto& bits = std::get<std::string>(c.parameter.value);
  std::vector<std::string> checked;
  for (std::size_t i = 0; i < items.size(); ++i)
    if (bits[i] == '1') checked.push_back(items[i]);
  CHECK(checked == std::vector<std::string>{"BB", "CC"});

  const auto& r = pw(one("#@IVISIT:RADIOBUTTON & name & [AA,BB,CC,DD] & strvar & AA"));
  CHECK(std::get<RadioButtonConfig>(r.widget.config).items.size() == 4);
  CHECK(r.parameter.value == ParamValue{std::string("AA")});

  const auto& b = pw(one("#@IVISIT:BUTTON & name & [labeltext,buttontext] & strvar"));
  CHECK(std::get<ButtonConfig>(b.widget.config) == ButtonConfig{"labeltext", "buttontext"});
  CHECK(b.widget.target == "strvar");
}

TEST_CASE("IMAGE and TEXT_OUT examples") {
  const auto& i = dw(one("#@IVISIT:IMAGE & name & 1.0 & [0,255] & img_var & int"));
  CHECK(i.widget == DataWidgetDef{"name", {}, ImageConfig{1.0, 0, 255, ValueType::Int}, "img_var"});
  CHECK(i.data == DataArrayDef{"img_var", DataKind::Image});

  auto just = [](const std::string& opt) {
    return std::get<TextOutConfig>(dw(one("#@IVISIT:TEXT_OUT & name & [20,5] & " + opt + " & strvar")).widget.config)
        .justification;
  };
  CHECK(just("None") == Justification::Center);
  CHECK(just("just_left") == Justification::Left);
  CHECK(just("[just_right]") == Justification::Right);
  CHECK(just("[just_left,just_center]") == Justification::Center);
  CHECK(parse_error("#@IVISIT:TEXT_OUT & name & [20,5] & sideways & strvar") == "bad option");
}

TEST_CASE("SIMULATION names the context") {
  CHECK(std::get<ContextSpec>(one("#@IVISIT:SIMULATION & sim_HelloWorld1")).name == "sim_HelloWorld1");
}

TEST_CASE("malformed directives") {
  CHECK(parse_error("#@IVISIT:SLIDER & name & [200,1] & [0,9,3] & var & -1 & int & 0") == "rangelist arity");
  CHECK(parse_error("#@IVISIT:SLIDER & name & [200,1] & [0,9,3,1] & var & -1 & int") == "wrong arity");
  CHECK(parse_error("#@IVISIT:SLIDER & name & [200,1] & [0,x,3,1] & var & -1 & int & 0") == "unparseable number");
  CHECK(parse_error("#@IVISIT:SLIDER & name & [200,1] & [0,9,3,1] & var & -1 & complex & 0") == "bad type");
  CHECK(parse_error("#@IVISIT:SLIDER & name & [200,1] & [9,0,3,1] & var & -1 & int & 0") == "bad range");
  CHECK(parse_error("#@IVISIT:CHECKBOX & name & [AA,BB,CC,DD] & strvar & 011") == "encoding length");
  CHECK(parse_error("#@IVISIT:LISTSEL & name & [20,5] & ['A',B] & var & -1 & string & B") == "quotation marks");
  CHECK(parse_error("#@IVISIT:RADIOBUTTON & name & [AA,BB] & strvar & ZZ") == "unknown item");
  CHECK(parse_error("#@IVISIT:KNOB & name") == "unknown keyword");
}

TEST_CASE("canonical serialization reparses to an equal spec") {
  const std::string all_kinds =
      "#@IVISIT:SIMULATION & sim_name\n"
      "#@IVISIT:SLIDER & name & [200,1] & [0,9,3,1] & var & -1 & int & 0\n"
      "#@IVISIT:DICTSLIDER & ParDict & [200,20,-1,2,10] & dict_par & 0\n"
      "#@IVISIT:DICTSLIDERITEM & Item1 & [0, 9,3,1] & item1 & int & 3\n"
      "#@IVISIT:DICTSLIDERITEM & Item2 & [0,30,4,2] & item2 & float & .5\n"
      "#@IVISIT:TEXT_IN & name2 & [20,5] & strvar & -1 & InitialText\n"
      "#@IVISIT:LISTSEL & name3 &[20,5] & [A,B,C] & var3 & -1 & string & A\n"
      "#@IVISIT:CHECKBOX & name4 & [AA,BB,CC,DD] & strvar4 & 0110\n"
      "#@IVISIT:RADIOBUTTON & name5 & [AA,BB,CC,DD] & strvar5 & AA\n"
      "#@IVISIT:BUTTON & name6 & [labeltext,buttontext] & strvar6\n"
      "#@IVISIT:IMAGE & name7 & 1.0 & [0,255] & img_var & int\n"
      "#@IVISIT:TEXT_OUT & name8 & [20,5] & just_left & strvar8\n";
  const auto specs = parse_source(all_kinds);
  CHECK(specs.size() == 10);
  for (const auto& s : specs) {
    const auto text = serialize_directive(s);
    const auto again = parse_source(text);
    REQUIRE(again.size() == 1);
    CHECK(again.front() == s);
    CHECK(serialize_directive(again.front()) == text);
  }
}

TEST_CASE("property: random sliders and dictsliders survive serialize/reparse") {
  std::mt19937_64 rng(1234);
  std::uniform_real_distribution<double> u(-1000, 1000);
  std::uniform_int_distribution<int> ticks(2, 50);
  for (int n = 0; n < 500; ++n) {
    const double lo = u(rng);
    const double hi = lo + std::abs(u(rng)) + 1e-3;
    const double inc = (hi - lo) / ticks(rng);
    const double init = lo + (hi - lo) * std::uniform_real_distribution<double>(0, 1)(rng);
    ParamWidgetSpec s;
    s.widget = {"w" + std::to_string(n), {}, SliderConfig{ticks(rng), 1, lo, hi, ticks(rng), inc, ValueType::Float},
                "v", n % 3 - 1};
    s.parameter = {"v", ParamKind::Float, init, n % 3 - 1};
    const auto again = parse_source(serialize_directive(s));
    REQUIRE(again.size() == 1);
    CHECK(again.front() == WidgetSpec{s});

    ParamWidgetSpec d;
    DictSliderConfig dc{200, 20, 1 + n % 4, n % 3, 10, 0, {}};
    KeyedGroup g;
    for (int k = 0; k < 1 + n % 4; ++k) {
      const std::string key = "k" + std::to_string(k);
      dc.items.push_back({"Item" + std::to_string(k), lo, hi, 3, inc, key, ValueType::Float});
      g.entries.push_back({key, init});
    }
    dc.selected = n % static_cast<int>(dc.items.size());
    d.widget = {"d", {}, dc, "group", -1};
    d.parameter = {"group", ParamKind::KeyedGroup, g, -1};
    const auto dagain = parse_source(serialize_directive(d));
    REQUIRE(dagain.size() == 1);
    CHECK(dagain.front() == WidgetSpec{d});
  }
}

TEST_CASE("merge: second parse with preserve_state creates nothing and keeps geometry") {
  const auto specs = parse_source(
      "#@IVISIT:SIMULATION & sim_HelloWorld1\n"
      "#@IVISIT:SLIDER & s & [200,1] & [0,9,3,1] & var & -1 & int & 0\n"
      "#@IVISIT:TEXT_OUT & out & [20,5] & None & res\n");
  WidgetCollection coll;
  const auto first = merge_into_collection(specs, coll);
  CHECK(first.created == 2);
  CHECK(first.context == "sim_HelloWorld1");
  CHECK(coll.context.name == "sim_HelloWorld1");
  coll.find_pwidget("s")->geometry = {40, 80};
  coll.find_parameter("var", -1)->value = std::int64_t{7};
  const auto second = merge_into_collection(specs, coll);
  CHECK(second.created == 0);
  CHECK(second.unchanged == 2);
  CHECK(coll.find_pwidget("s")->geometry == Geometry{40, 80});
  CHECK(coll.find_parameter("var", -1)->value == ParamValue{std::int64_t{7}});
  CHECK(validate_collection(coll).empty());
}

TEST_CASE("merge: preserved value outside a narrowed range resets to the directive init") {
  WidgetCollection coll;
  merge_into_collection(parse_source("#@IVISIT:SLIDER & s & [200,1] & [0,9,3,1] & var & -1 & int & 0"), coll);
  coll.find_parameter("var", -1)->value = std::int64_t{8};
  merge_into_collection(parse_source("#@IVISIT:SLIDER & s & [200,1] & [0,5,3,1] & var & -1 & int & 2"), coll);
  CHECK(coll.find_parameter("var", -1)->value == ParamValue{std::int64_t{2}});
}

TEST_CASE("merge: kind conflict leaves the collection untouched") {
  WidgetCollection coll;
  merge_into_collection(parse_source("#@IVISIT:SLIDER & w & [200,1] & [0,9,3,1] & var & -1 & int & 0"), coll);
  const auto before = coll;
  const auto specs = parse_source(
      "#@IVISIT:SIMULATION & other\n"
      "#@IVISIT:TEXT_IN & w & [20,5] & var2 & -1 & hi\n");
  CHECK(error_code_of([&] { merge_into_collection(specs, coll); }) == "kind conflict");
  CHECK(coll == before);
}

TEST_CASE("merge: empty specs leave the collection unchanged") {
  WidgetCollection coll;
  merge_into_collection(parse_source("#@IVISIT:SLIDER & w & [200,1] & [0,9,3,1] & var & -1 & int & 0"), coll);
  const auto before = coll;
  const auto r = merge_into_collection({}, coll);
  CHECK(r == MergeReport{0, 0, 0, std::string(kDefaultContext)});
  CHECK(coll == before);
}
