// SPDX-License-Identifier: Apache-2.0
#include "hypo/specfile.hpp"

#include <toml.hpp>

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

namespace hypo {

namespace {

std::string where(const std::string& name, const toml::source_region& src) {
  std::ostringstream os;
  os << name << ":" << src.begin.line << ":" << src.begin.column;
  return os.str();
}

[[noreturn]] void fail(const std::string& name, const toml::node& node, const std::string& msg) {
  throw InputError(where(name, node.source()) + ": " + msg);
}

void reject_unknown(const std::string& name, const toml::table& t, const std::set<std::string>& allowed,
                    const std::string& section) {
  for (const auto& [k, v] : t)
    if (!allowed.count(std::string(k.str())))
      throw InputError(where(name, k.source()) + ": unknown key '" + std::string(k.str()) + "' in " + section);
}

double as_real(const std::string& name, const toml::node& n, const std::string& what) {
  if (auto v = n.as_integer()) return static_cast<double>(v->get());
  if (auto v = n.as_floating_point()) return v->get();
  if (auto v = n.as_string()) {
    try {
      return to_double(parse_rational(v->get()));
    } catch (const std::exception& e) {
      fail(name, n, what + ": " + e.what());
    }
  }
  fail(name, n, what + " must be a number");
}

long as_int(const std::string& name, const toml::node& n, const std::string& what) {
  if (auto v = n.as_integer()) return static_cast<long>(v->get());
  fail(name, n, what + " must be an integer");
}

const toml::node& require(const std::string& name, const toml::table& t, const std::string& key,
                          const toml::node& parent) {
  const toml::node* n = t.get(key);
  if (!n) fail(name, parent, "missing key '" + key + "'");
  return *n;
}

std::vector<TrigTerm> parse_terms(const std::string& name, const toml::node& n) {
  const toml::array* arr = n.as_array();
  if (!arr) fail(name, n, "terms must be an array of [freq, cos, sin]");
  std::vector<TrigTerm> out;
  for (const auto& item : *arr) {
    const toml::array* t = item.as_array();
    if (!t || t->size() != 3) fail(name, item, "each term must be [freq, cos, sin]");
    TrigTerm term;
    term.freq = static_cast<int>(as_int(name, *t->get(0), "freq"));
    term.cos_amp = as_real(name, *t->get(1), "cos amplitude");
    term.sin_amp = as_real(name, *t->get(2), "sin amplitude");
    out.push_back(term);
  }
  return out;
}

PeriodicFunction parse_constant(const std::string& name, const toml::node& n) {
  if (auto v = n.as_string()) {
    try {
      return PeriodicFunction::constant(parse_rational(v->get()));
    } catch (const std::exception& e) {
      fail(name, n, std::string("bad rational: ") + e.what());
    }
  }
  return PeriodicFunction::constant(as_real(name, n, "constant"));
}

PeriodicFunction parse_coefficient(const std::string& name, const toml::node& n) {
  if (n.is_number() || n.is_string()) return parse_constant(name, n);
  if (n.is_array()) return PeriodicFunction::from_terms(parse_terms(name, n));
  if (const toml::table* t = n.as_table()) {
    reject_unknown(name, *t, {"const", "terms"}, "coefficient");
    PeriodicFunction c = t->get("const") ? parse_constant(name, *t->get("const")) : PeriodicFunction::zero();
    PeriodicFunction s = t->get("terms") ? PeriodicFunction::from_terms(parse_terms(name, *t->get("terms")))
                                         : PeriodicFunction::zero();
    return c + s;
  }
  fail(name, n, "coefficient must be a number, a rational string, a term array or a table");
}

EigenvalueProvider parse_operator(const std::string& name, const toml::table& t, const toml::node& node,
                                  const std::string& base_dir) {
  reject_unknown(name, t, {"kind", "n", "M", "rho", "csv", "values", "name", "coef", "power", "length"}, "[operator]");
  const toml::node& kn = require(name, t, "kind", node);
  auto kind = kn.value<std::string>();
  if (!kind) fail(name, kn, "kind must be a string");
  OperatorMeta meta;
  if (const toml::node* n = t.get("n")) meta.n = static_cast<int>(as_int(name, *n, "n"));
  if (const toml::node* n = t.get("M")) meta.M = static_cast<int>(as_int(name, *n, "M"));
  if (const toml::node* n = t.get("rho")) meta.rho = as_real(name, *n, "rho");
  try {
    if (*kind == "harmonic_oscillator") {
      for (const char* k : {"csv", "values", "name", "coef", "power", "length", "M", "rho"})
        if (t.get(k)) fail(name, *t.get(k), std::string("'") + k + "' does not apply to the harmonic oscillator");
      return EigenvalueProvider::harmonic_oscillator(meta.n);
    }
    if (*kind == "table") {
      std::vector<double> values;
      if (const toml::node* c = t.get("csv")) {
        auto p = c->value<std::string>();
        if (!p) fail(name, *c, "csv must be a path string");
        std::filesystem::path path(*p);
        if (path.is_relative()) path = std::filesystem::path(base_dir) / path;
        values = load_eigenvalue_csv(path.string());
      } else if (const toml::node* v = t.get("values")) {
        const toml::array* arr = v->as_array();
        if (!arr) fail(name, *v, "values must be an array");
        for (const auto& x : *arr) values.push_back(as_real(name, x, "eigenvalue"));
      } else {
        fail(name, node, "a table operator needs csv or values");
      }
      return EigenvalueProvider::table(std::move(values), meta);
    }
    if (*kind == "formula") {
      const toml::node& nn = require(name, t, "name", node);
      auto fname = nn.value<std::string>();
      if (fname == "power") {
        double coef = t.get("coef") ? as_real(name, *t.get("coef"), "coef") : 1.0;
        double power = t.get("power") ? as_real(name, *t.get("power"), "power") : static_cast<double>(meta.M) / (2.0 * meta.n);
        return EigenvalueProvider::power_law(coef, power, meta);
      }
      if (fname == "double_exponential") {
        long len = as_int(name, require(name, t, "length", node), "length");
        if (len < 1) fail(name, *t.get("length"), "length must be positive");
        return EigenvalueProvider::double_exponential(static_cast<std::size_t>(len), meta);
      }
      fail(name, nn, "formula name must be \"power\" or \"double_exponential\"");
    }
  } catch (const InputError& e) {
    std::string msg = e.what();
    if (msg.rfind(name + ":", 0) == 0) throw;
    fail(name, node, msg);
  }
  fail(name, kn, "unknown operator kind '" + *kind + "'");
}

}  // namespace

SystemSpec parse_spec(const std::string& text, const std::string& name, const std::string& base_dir) {
  toml::table doc;
  try {
    doc = toml::parse(text, name);
  } catch (const toml::parse_error& e) {
    std::ostringstream os;
    os << name << ":" << e.source().begin.line << ":" << e.source().begin.column << ": " << e.description();
    throw InputError(os.str());
  }
  reject_unknown(name, doc, {"system", "operator", "equation"}, "the document");
  const toml::table* sys = doc["system"].as_table();
  if (!sys) throw InputError(name + ": missing [system] section");
  reject_unknown(name, *sys, {"m", "mu"}, "[system]");
  const toml::node* mn = sys->get("m");
  if (!mn) fail(name, *doc.get("system"), "missing key 'm'");
  const long m = as_int(name, *mn, "m");
  double mu = 0.5;
  if (const toml::node* n = sys->get("mu")) mu = as_real(name, *n, "mu");
  const toml::table* op = doc["operator"].as_table();
  if (!op) throw InputError(name + ": missing [operator] section");
  EigenvalueProvider provider = parse_operator(name, *op, *doc.get("operator"), base_dir);
  const toml::array* eqs = doc["equation"].as_array();
  if (!eqs) throw InputError(name + ": missing [[equation]] entries");
  std::vector<Equation> equations;
  for (const auto& item : *eqs) {
    const toml::table* t = item.as_table();
    if (!t) fail(name, item, "equation must be a table");
    reject_unknown(name, *t, {"a", "b"}, "[[equation]]");
    Equation e;
    if (const toml::node* a = t->get("a")) e.a = parse_coefficient(name, *a);
    if (const toml::node* b = t->get("b")) e.b = parse_coefficient(name, *b);
    equations.push_back(std::move(e));
  }
  if (static_cast<long>(equations.size()) != m)
    fail(name, *mn, "m = " + std::to_string(m) + " but " + std::to_string(equations.size()) + " equations are given");
  try {
    return SystemSpec(std::move(equations), std::move(provider), mu);
  } catch (const InputError& e) {
    fail(name, *doc.get("system"), e.what());
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

SystemSpec load_spec(const std::string& path) {
  const std::string text = read_file(path);
  std::filesystem::path p(path);
  return parse_spec(text, path, p.has_parent_path() ? p.parent_path().string() : std::string("."));
}

std::string content_hash(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace hypo
