#include <cmath>

#include "simdeck/engine.hpp"
#include "simdeck/error.hpp"
#include "simdeck/text.hpp"

namespace simdeck {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::int64_t to_int(const ParamValue& v) {
  if (const auto* i = std::get_if<std::int64_t>(&v)) return *i;
  if (const auto* d = std::get_if<double>(&v); d && std::isfinite(*d)) return std::llround(*d);
  if (const auto* s = std::get_if<std::string>(&v))
    if (auto i = text::parse_int(*s)) return *i;
  throw Error("type conversion", "expected integer");
}

double to_real(const ParamValue& v) {
  if (const auto* i = std::get_if<std::int64_t>(&v)) return static_cast<double>(*i);
  if (const auto* d = std::get_if<double>(&v)) return *d;
  if (const auto* s = std::get_if<std::string>(&v))
    if (auto d = text::parse_double(*s)) return *d;
  throw Error("type conversion", "expected number");
}

std::string to_text(const ParamValue& v) {
  if (const auto* s = std::get_if<std::string>(&v)) return *s;
  if (const auto* i = std::get_if<std::int64_t>(&v)) return text::format_int(*i);
  if (const auto* d = std::get_if<double>(&v)) return text::format_double(*d);
  throw Error("type conversion", "expected text");
}

template <class T>
T& element(std::vector<T>& vec, int list_index) {
  if (list_index < 0 || static_cast<std::size_t>(list_index) >= vec.size()) throw Error("list index", std::to_string(list_index));
  return vec[static_cast<std::size_t>(list_index)];
}

void scalar_only(int list_index) {
  if (list_index >= 0) throw Error("list index", "field is not a list");
}

}  // namespace

void FieldRegistry::add_param(const std::string& name, ParamPtr p) {
  if (params_.count(name) || data_.count(name)) throw Error("duplicate field", name);
  params_.emplace(name, p);
}

void FieldRegistry::add_data(const std::string& name, DataPtr p) {
  if (params_.count(name) || data_.count(name)) throw Error("duplicate field", name);
  data_.emplace(name, p);
}

void FieldRegistry::param(const std::string& n, std::int64_t& f) { add_param(n, &f); }
void FieldRegistry::param(const std::string& n, double& f) { add_param(n, &f); }
void FieldRegistry::param(const std::string& n, std::string& f) { add_param(n, &f); }
void FieldRegistry::param(const std::string& n, std::vector<std::int64_t>& f) { add_param(n, &f); }
void FieldRegistry::param(const std::string& n, std::vector<double>& f) { add_param(n, &f); }
void FieldRegistry::param(const std::string& n, std::vector<std::string>& f) { add_param(n, &f); }
void FieldRegistry::param(const std::string& n, KeyedGroup& f) { add_param(n, &f); }
void FieldRegistry::data(const std::string& n, std::string& f) { add_data(n, &f); }
void FieldRegistry::data(const std::string& n, ImageBuffer& f) { add_data(n, &f); }
void FieldRegistry::data(const std::string& n, Image8& f) { add_data(n, &f); }

SimRegistry FieldRegistry::describe() const {
  SimRegistry out;
  for (const auto& [name, ptr] : params_) {
    FieldDescriptor d{FieldRole::Parameter, FieldType::Float, std::nullopt, {}};
    std::visit(overloaded{
                   [&](std::int64_t*) { d.type = FieldType::Int; },
                   [&](double*) { d.type = FieldType::Float; },
                   [&](std::string*) { d.type = FieldType::String; },
                   [&](std::vector<std::int64_t>* v) { d.type = FieldType::Int, d.list_size = v->size(); },
                   [&](std::vector<double>* v) { d.type = FieldType::Float, d.list_size = v->size(); },
                   [&](std::vector<std::string>* v) { d.type = FieldType::String, d.list_size = v->size(); },
                   [&](KeyedGroup* g) {
                     d.type = FieldType::KeyedGroup;
                     for (const auto& e : g->entries) d.keys.push_back(e.key);
                   },
               },
               ptr);
    out.emplace(name, std::move(d));
  }
  for (const auto& [name, ptr] : data_) {
    const bool is_text = std::holds_alternative<std::string*>(ptr);
    out.emplace(name, FieldDescriptor{FieldRole::Data, is_text ? FieldType::Text : FieldType::Image, std::nullopt, {}});
  }
  return out;
}

void FieldRegistry::apply(const ParamWrite& w) {
  const auto it = params_.find(w.target);
  if (it == params_.end()) throw Error("no such parameter", w.target);
  const int idx = w.list_index;
  std::visit(overloaded{
                 [&](std::int64_t* f) { scalar_only(idx), *f = to_int(w.value); },
                 [&](double* f) { scalar_only(idx), *f = to_real(w.value); },
                 [&](std::string* f) { scalar_only(idx), *f = to_text(w.value); },
                 [&](std::vector<std::int64_t>* f) { element(*f, idx) = to_int(w.value); },
                 [&](std::vector<double>* f) { element(*f, idx) = to_real(w.value); },
                 [&](std::vector<std::string>* f) { element(*f, idx) = to_text(w.value); },
                 [&](KeyedGroup* g) {
                   scalar_only(idx);
                   if (w.key) {
                     if (const auto* i = std::get_if<std::int64_t>(&w.value)) g->set(*w.key, *i);
                     else g->set(*w.key, to_real(w.value));
                   } else if (const auto* src = std::get_if<KeyedGroup>(&w.value)) {
                     for (const auto& e : src->entries) g->set(e.key, e.value);
                   } else {
                     throw Error("type conversion", "expected keyed group");
                   }
                 },
             },
             it->second);
}

ParamValue FieldRegistry::read(std::string_view name, int idx) const {
  const auto it = params_.find(name);
  if (it == params_.end()) throw Error("no such parameter", std::string(name));
  return std::visit(overloaded{
                        [&](std::int64_t* f) -> ParamValue { return scalar_only(idx), *f; },
                        [&](double* f) -> ParamValue { return scalar_only(idx), *f; },
                        [&](std::string* f) -> ParamValue { return scalar_only(idx), *f; },
                        [&](std::vector<std::int64_t>* f) -> ParamValue { return element(*f, idx); },
                        [&](std::vector<double>* f) -> ParamValue { return element(*f, idx); },
                        [&](std::vector<std::string>* f) -> ParamValue { return element(*f, idx); },
                        [&](KeyedGroup* g) -> ParamValue { return scalar_only(idx), *g; },
                    },
                    it->second);
}

std::optional<std::string> FieldRegistry::text(std::string_view name) const {
  const auto it = data_.find(name);
  if (it == data_.end()) return std::nullopt;
  if (const auto* s = std::get_if<std::string*>(&it->second)) return **s;
  return std::nullopt;
}

std::optional<Image8> FieldRegistry::image(std::string_view name, double lo, double hi) const {
  const auto it = data_.find(name);
  if (it == data_.end()) return std::nullopt;
  if (const auto* b = std::get_if<ImageBuffer*>(&it->second)) return image_normalize(**b, lo, hi);
  if (const auto* b = std::get_if<Image8*>(&it->second)) {
    const Image8& img = **b;
    if (lo == 0.0 && hi == 255.0) return img;
    ImageBuffer tmp(img.width, img.height, img.channels);
    for (std::size_t i = 0; i < img.data.size(); ++i) tmp.data[i] = img.data[i];
    return image_normalize(tmp, lo, hi);
  }
  return std::nullopt;
}

}  // namespace simdeck
