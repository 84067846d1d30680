#include "fqlab/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <algorithm>
#include <limits>
#include <sstream>
#include <system_error>

#include <json.hpp>

#include "fqlab/error.hpp"

namespace fqlab::io {
namespace {

using ojson = nlohmann::ordered_json;
using json = nlohmann::json;

json parse(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Parse, e.what());
  }
}

double num(const json& j, const char* field) {
  if (j.is_string()) return parse_decimal(j.get<std::string>());
  if (j.is_number()) return j.get<double>();
  throw Error(ErrorKind::Parse, std::string("field '") + field + "' is not a number");
}

const json& need(const json& j, const char* field) {
  if (!j.is_object() || !j.contains(field)) {
    throw Error(ErrorKind::Parse, std::string("missing field '") + field + "'");
  }
  return j.at(field);
}

double num_field(const json& j, const char* field) { return num(need(j, field), field); }

ojson cplx_json(cplx z) {
  ojson o;
  o["re"] = format_decimal(z.real());
  o["im"] = format_decimal(z.imag());
  return o;
}

cplx cplx_from(const json& j) { return {num_field(j, "re"), num_field(j, "im")}; }

std::string dump(const ojson& j) { return j.dump(2) + "\n"; }

}  // namespace

std::string format_decimal(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

double parse_decimal(std::string_view s) {
  if (s == "inf" || s == "+inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  double v = 0.0;
  const char* first = s.data();
  if (!s.empty() && s.front() == '+') ++first;
  auto res = std::from_chars(first, s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw Error(ErrorKind::Parse, "not a decimal: '" + std::string(s) + "'");
  }
  return v;
}

std::string polynomial_to_json(const ExpPolynomial& p) {
  ojson j;
  j["terms"] = ojson::array();
  for (const auto& t : p.terms()) {
    ojson o;
    o["re"] = format_decimal(t.amplitude.real());
    o["im"] = format_decimal(t.amplitude.imag());
    o["gamma"] = format_decimal(t.gamma);
    j["terms"].push_back(o);
  }
  j["hermitian"] = p.hermitian();
  return dump(j);
}

ExpPolynomial polynomial_from_json(std::string_view text) {
  const auto j = parse(text);
  const auto& terms = need(j, "terms");
  if (!terms.is_array()) throw Error(ErrorKind::Parse, "'terms' must be an array");
  std::vector<Term> out;
  for (const auto& t : terms) {
    out.push_back({{num_field(t, "re"), num_field(t, "im")}, num_field(t, "gamma")});
  }
  bool herm = false;
  if (j.contains("hermitian")) {
    if (!j["hermitian"].is_boolean()) throw Error(ErrorKind::Parse, "'hermitian' must be a bool");
    herm = j["hermitian"].get<bool>();
  }
  try {
    return ExpPolynomial(std::move(out), herm);
  } catch (const Error& e) {
    throw Error(ErrorKind::Parse, e.what());
  }
}

std::string zeroset_to_json(const ZeroSet& zs) {
  ojson j;
  j["window"] = {format_decimal(zs.window.a), format_decimal(zs.window.b)};
  j["zeros"] = ojson::array();
  for (double z : zs.zeros) j["zeros"].push_back(format_decimal(z));
  j["min_gap"] = format_decimal(zs.min_gap);
  j["certified_strip_height"] = format_decimal(zs.certified_strip_height);
  j["p_abs"] = ojson::array();
  for (double v : zs.value_magnitudes) j["p_abs"].push_back(format_decimal(v));
  j["dp_abs"] = ojson::array();
  for (double v : zs.derivative_magnitudes) j["dp_abs"].push_back(format_decimal(v));
  return dump(j);
}

ZeroSet zeroset_from_json(std::string_view text) {
  const auto j = parse(text);
  ZeroSet zs;
  const auto& w = need(j, "window");
  if (!w.is_array() || w.size() != 2) throw Error(ErrorKind::Parse, "'window' must be [a, b]");
  zs.window = {num(w[0], "window"), num(w[1], "window")};
  if (!(zs.window.a < zs.window.b)) throw Error(ErrorKind::Parse, "empty window");
  for (const auto& z : need(j, "zeros")) zs.zeros.push_back(num(z, "zeros"));
  for (std::size_t i = 1; i < zs.zeros.size(); ++i) {
    if (!(zs.zeros[i - 1] < zs.zeros[i])) throw Error(ErrorKind::Parse, "zeros must be strictly increasing");
  }
  if (j.contains("p_abs")) {
    for (const auto& v : j["p_abs"]) zs.value_magnitudes.push_back(num(v, "p_abs"));
  }
  if (j.contains("dp_abs")) {
    for (const auto& v : j["dp_abs"]) zs.derivative_magnitudes.push_back(num(v, "dp_abs"));
  }
  if ((!zs.value_magnitudes.empty() && zs.value_magnitudes.size() != zs.zeros.size()) ||
      (!zs.derivative_magnitudes.empty() && zs.derivative_magnitudes.size() != zs.zeros.size())) {
    throw Error(ErrorKind::Parse, "p_abs/dp_abs length differs from zeros");
  }
  zs.min_gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < zs.zeros.size(); ++i) {
    zs.min_gap = std::min(zs.min_gap, zs.zeros[i] - zs.zeros[i - 1]);
  }
  if (j.contains("certified_strip_height")) {
    zs.certified_strip_height = num(j["certified_strip_height"], "certified_strip_height");
  }
  return zs;
}

std::string zeroset_to_csv(const ZeroSet& zs) {
  std::string out = "lambda,p_abs,dp_abs\n";
  for (std::size_t i = 0; i < zs.zeros.size(); ++i) {
    out += format_decimal(zs.zeros[i]);
    out += ',';
    out += i < zs.value_magnitudes.size() ? format_decimal(zs.value_magnitudes[i]) : "";
    out += ',';
    out += i < zs.derivative_magnitudes.size() ? format_decimal(zs.derivative_magnitudes[i]) : "";
    out += '\n';
  }
  return out;
}

std::string series_to_json(const ExpSeries& f) {
  ojson j;
  j["atoms"] = ojson::array();
  for (const auto& a : f.atoms()) {
    ojson o;
    o["u"] = format_decimal(a.u);
    o["re"] = format_decimal(a.c.real());
    o["im"] = format_decimal(a.c.imag());
    j["atoms"].push_back(o);
  }
  j["cutoff"] = format_decimal(f.cutoff());
  j["tail_bound"] = format_decimal(f.tail_bound());
  return dump(j);
}

ExpSeries series_from_json(std::string_view text, SeriesParams params) {
  const auto j = parse(text);
  std::vector<SeriesAtom> atoms;
  for (const auto& a : need(j, "atoms")) {
    atoms.push_back({num_field(a, "u"), {num_field(a, "re"), num_field(a, "im")}});
  }
  if (j.contains("cutoff")) params.cutoff = num(j["cutoff"], "cutoff");
  const double tail = j.contains("tail_bound") ? num(j["tail_bound"], "tail_bound") : 0.0;
  try {
    return ExpSeries(std::move(atoms), params, tail);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::AtomBudgetExceeded) throw;
    throw Error(ErrorKind::Parse, e.what());
  }
}

std::string spectrum_to_json(const AtomicMeasure& mu) {
  ojson j;
  j["atoms"] = ojson::array();
  for (const auto& a : mu.atoms) {
    ojson o;
    o["s"] = format_decimal(a.s);
    o["re"] = format_decimal(a.a.real());
    o["im"] = format_decimal(a.a.imag());
    j["atoms"].push_back(o);
  }
  j["a0"] = cplx_json(mu.a0);
  j["alpha"] = cplx_json(mu.alpha);
  j["beta"] = cplx_json(mu.beta);
  j["S_max"] = format_decimal(mu.s_max);
  ojson g;
  g["K"] = format_decimal(mu.growth.K);
  g["m"] = format_decimal(mu.growth.m);
  g["m_width"] = format_decimal(mu.growth.m_width);
  g["K_envelope"] = format_decimal(mu.growth.K_envelope);
  j["growth"] = g;
  j["merge_events"] = std::to_string(mu.merge_events);
  j["dropped_atoms"] = std::to_string(mu.dropped_atoms);
  return dump(j);
}

AtomicMeasure spectrum_from_json(std::string_view text) {
  const auto j = parse(text);
  AtomicMeasure mu;
  for (const auto& a : need(j, "atoms")) {
    mu.atoms.push_back({num_field(a, "s"), {num_field(a, "re"), num_field(a, "im")}});
  }
  std::sort(mu.atoms.begin(), mu.atoms.end(),
            [](const SpectrumAtom& x, const SpectrumAtom& y) { return x.s < y.s; });
  const auto& a0 = need(j, "a0");
  mu.a0 = a0.is_object() ? cplx_from(a0) : cplx(num(a0, "a0"), 0.0);
  mu.alpha = cplx_from(need(j, "alpha"));
  mu.beta = cplx_from(need(j, "beta"));
  mu.s_max = num_field(j, "S_max");
  if (j.contains("growth")) {
    const auto& g = j["growth"];
    mu.growth = {num_field(g, "K"), num_field(g, "m"), num_field(g, "m_width"),
                 num_field(g, "K_envelope")};
  } else {
    mu.growth = fit_growth(mu.atoms, mu.s_max);
  }
  if (j.contains("merge_events")) mu.merge_events = static_cast<std::size_t>(num(j["merge_events"], "merge_events"));
  if (j.contains("dropped_atoms")) mu.dropped_atoms = static_cast<std::size_t>(num(j["dropped_atoms"], "dropped_atoms"));
  return mu;
}

std::string report_to_json(const VerificationReport& report) {
  ojson j;
  j["checks"] = ojson::array();
  for (const auto& c : report.sorted_checks()) {
    ojson o;
    o["name"] = c.name;
    o["residual"] = format_decimal(c.residual);
    o["budget"] = format_decimal(c.budget);
    o["pass"] = c.pass;
    j["checks"].push_back(o);
  }
  ojson params = ojson::object();
  for (const auto& [k, v] : report.params()) params[k] = v;
  j["params"] = params;
  j["all_pass"] = report.all_pass();
  return dump(j);
}

VerificationReport report_from_json(std::string_view text) {
  const auto j = parse(text);
  VerificationReport r;
  for (const auto& c : need(j, "checks")) {
    const auto& name = need(c, "name");
    if (!name.is_string()) throw Error(ErrorKind::Parse, "check name must be a string");
    r.add(name.get<std::string>(), num_field(c, "residual"), num_field(c, "budget"));
  }
  if (j.contains("params") && j["params"].is_object()) {
    for (const auto& [k, v] : j["params"].items()) {
      r.set_param(k, v.is_string() ? v.get<std::string>() : v.dump());
    }
  }
  return r;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::InvalidArgument, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::InvalidArgument, "cannot write " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw Error(ErrorKind::InvalidArgument, "write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw Error(ErrorKind::InvalidArgument, "rename to " + path.string() + " failed: " + ec.message());
  }
}

}  // namespace fqlab::io
