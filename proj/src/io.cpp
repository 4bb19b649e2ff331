#include "prodsys/io.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace prodsys::io {

namespace {

std::string describe(const std::string& file, int line, const std::string& field, const std::string& message) {
  std::ostringstream os;
  if (!file.empty()) os << file << ':';
  if (line > 0) os << line << ':';
  if (!field.empty()) os << " field " << field << ':';
  os << ' ' << message;
  return os.str();
}

[[noreturn]] void fail(const std::string& where, const std::string& message) {
  throw ParseError("", 0, where.empty() ? "/" : where, message);
}

std::string at(const std::string& where, const std::string& key) { return where + "/" + key; }
std::string at(const std::string& where, std::size_t i) { return where + "/" + std::to_string(i); }

const json& member(const json& j, const std::string& key, const std::string& where) {
  if (!j.is_object()) fail(where, "expected an object");
  const auto it = j.find(key);
  if (it == j.end()) fail(at(where, key), "missing");
  return *it;
}

const json& array(const json& j, const std::string& where) {
  if (!j.is_array()) fail(where, "expected an array");
  return j;
}

double number(const json& j, const std::string& where) {
  if (!j.is_number()) fail(where, "expected a number");
  const double x = j.get<double>();
  if (!std::isfinite(x)) fail(where, "not finite");
  return x;
}

int integer(const json& j, const std::string& where) {
  if (!j.is_number_integer()) fail(where, "expected an integer");
  return j.get<int>();
}

Complex complex_number(const json& j, const std::string& where) {
  if (j.is_number()) return {number(j, where), 0.0};
  if (!j.is_array() || j.size() != 2) fail(where, "expected [re, im]");
  return {number(j[0], at(where, 0)), number(j[1], at(where, 1))};
}

json complex_json(Complex z) { return json::array({z.real(), z.imag()}); }

// Errors thrown by the library while building a value from parsed fields.
template <class F>
auto guarded(const std::string& where, F&& f) {
  try {
    return f();
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    fail(where, e.what());
  }
}

}  // namespace

ParseError::ParseError(std::string file, int line, std::string field, std::string message)
    : Error(describe(file, line, field, message)),
      file_(std::move(file)),
      line_(line),
      field_(std::move(field)),
      message_(std::move(message)) {}

ParseError ParseError::in_file(const std::string& file) const { return {file, line_, field_, message_}; }

json load_json(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path, 0, "", "cannot open file");
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    const auto offset = std::min<std::size_t>(e.byte, text.size());
    int line = 1;
    for (std::size_t i = 0; i + 1 < offset; ++i)
      if (text[i] == '\n') ++line;
    std::string msg = e.what();
    if (const auto p = msg.find("syntax error"); p != std::string::npos) msg = msg.substr(p);
    throw ParseError(path, line, "", msg);
  }
}

Algebra parse_algebra(const json& j, const std::string& where) {
  std::vector<int> sizes;
  for (std::size_t i = 0; i < array(j, where).size(); ++i) {
    const int d = integer(j[i], at(where, i));
    if (d < 1) fail(at(where, i), "block size must be positive");
    sizes.push_back(d);
  }
  if (sizes.empty()) fail(where, "at least one block");
  return Algebra(sizes);
}

AlgebraElement parse_element(const Algebra& alg, const json& j, const std::string& where) {
  if (array(j, where).size() != static_cast<std::size_t>(alg.num_blocks()))
    fail(where, "expected " + std::to_string(alg.num_blocks()) + " blocks");
  CVector coords(alg.dim());
  for (int l = 0; l < alg.num_blocks(); ++l) {
    const auto& blk = array(j[static_cast<std::size_t>(l)], at(where, static_cast<std::size_t>(l)));
    const int d = alg.block_size(l);
    if (blk.size() != static_cast<std::size_t>(d * d))
      fail(at(where, static_cast<std::size_t>(l)), "expected " + std::to_string(d * d) + " entries");
    for (int p = 0; p < d * d; ++p)
      coords(alg.offset(l) + p) = complex_number(blk[static_cast<std::size_t>(p)],
                                                 at(at(where, static_cast<std::size_t>(l)), static_cast<std::size_t>(p)));
  }
  return AlgebraElement::from_coords(alg, coords);
}

BMatrix parse_bmatrix(const Algebra& alg, const json& j, const std::string& where) {
  const int rows = integer(member(j, "rows", where), at(where, "rows"));
  const int cols = integer(member(j, "cols", where), at(where, "cols"));
  if (rows < 0 || cols < 0) fail(where, "negative shape");
  const auto& entries = array(member(j, "entries", where), at(where, "entries"));
  if (entries.size() != static_cast<std::size_t>(rows * cols))
    fail(at(where, "entries"), "expected rows*cols = " + std::to_string(rows * cols) + " elements");
  BMatrix m(alg, rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) {
      const auto k = static_cast<std::size_t>(r * cols + c);
      m.set_entry(r, c, parse_element(alg, entries[k], at(at(where, "entries"), k)));
    }
  return m;
}

Bimodule parse_bimodule(const json& j, const std::string& where) {
  const Algebra alg = parse_algebra(member(j, "algebra", where), at(where, "algebra"));
  const int rank = integer(member(j, "rank", where), at(where, "rank"));
  if (rank < 0) fail(at(where, "rank"), "negative rank");
  if (j.contains("free")) {
    if (!j["free"].is_boolean() || !j["free"].get<bool>()) fail(at(where, "free"), "expected true");
    return Bimodule::free(alg, rank);
  }
  const auto& act = array(member(j, "action", where), at(where, "action"));
  if (act.size() != static_cast<std::size_t>(alg.dim()))
    fail(at(where, "action"), "expected one matrix per matrix unit (" + std::to_string(alg.dim()) + ")");
  std::vector<BMatrix> pi;
  for (std::size_t p = 0; p < act.size(); ++p) {
    pi.push_back(parse_bmatrix(alg, act[p], at(at(where, "action"), p)));
    if (pi.back().rows() != rank || pi.back().cols() != rank) fail(at(at(where, "action"), p), "expected rank x rank");
  }
  return guarded(where, [&] { return Bimodule(alg, rank, std::move(pi)); });
}

ModuleVector parse_vector(const Bimodule& f, const json& j, const std::string& where) {
  if (array(j, where).size() != static_cast<std::size_t>(f.rank()))
    fail(where, "expected " + std::to_string(f.rank()) + " entries");
  std::vector<AlgebraElement> entries;
  for (std::size_t i = 0; i < j.size(); ++i) entries.push_back(parse_element(f.algebra(), j[i], at(where, i)));
  if (entries.empty()) return ModuleVector::zero(f.algebra(), 0);
  auto x = ModuleVector::from_entries(entries);
  if (!f.contains(x)) fail(where, "vector does not lie in the module");
  return x;
}

UnitParams parse_unit(const Bimodule& f, const json& j, const std::string& where) {
  return {parse_element(f.algebra(), member(j, "beta", where), at(where, "beta")),
          parse_vector(f, member(j, "zeta", where), at(where, "zeta"))};
}

namespace {

std::vector<std::string> parse_labels(const json& j, const std::string& where) {
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < array(j, where).size(); ++i) {
    if (!j[i].is_string()) fail(at(where, i), "expected a string");
    labels.push_back(j[i].get<std::string>());
  }
  return labels;
}

}  // namespace

CPDKernel parse_kernel(const json& j, const std::string& where) {
  const auto labels = parse_labels(member(j, "labels", where), at(where, "labels"));
  const auto n = labels.size();
  if (j.contains("entries")) {
    const Algebra alg = parse_algebra(member(j, "algebra", where), at(where, "algebra"));
    const auto& entries = array(j["entries"], at(where, "entries"));
    if (entries.size() != n * n) fail(at(where, "entries"), "expected labels^2 entries");
    std::vector<SuperOperator> ops;
    for (std::size_t k = 0; k < entries.size(); ++k) {
      const auto w = at(at(where, "entries"), k);
      if (array(entries[k], w).size() != static_cast<std::size_t>(alg.dim()))
        fail(w, "expected the image of each of the " + std::to_string(alg.dim()) + " matrix units");
      CMatrix m(alg.dim(), alg.dim());
      for (int p = 0; p < alg.dim(); ++p)
        m.col(p) = parse_element(alg, entries[k][static_cast<std::size_t>(p)], at(w, static_cast<std::size_t>(p))).coords();
      ops.push_back(SuperOperator(alg, m));
    }
    return guarded(where, [&] { return CPDKernel(labels, std::move(ops)); });
  }
  const Bimodule f = parse_bimodule(member(j, "bimodule", where), at(where, "bimodule"));
  if (j.contains("vectors")) {
    const auto& vs = array(j["vectors"], at(where, "vectors"));
    if (vs.size() != n) fail(at(where, "vectors"), "expected one vector per label");
    std::vector<ModuleVector> xs;
    for (std::size_t i = 0; i < n; ++i) xs.push_back(parse_vector(f, vs[i], at(at(where, "vectors"), i)));
    return guarded(where, [&] { return CPDKernel::from_vectors(f, labels, xs); });
  }
  if (j.contains("units")) {
    const auto& us = array(j["units"], at(where, "units"));
    if (us.size() != n) fail(at(where, "units"), "expected one unit per label");
    std::vector<UnitParams> units;
    for (std::size_t i = 0; i < n; ++i) units.push_back(parse_unit(f, us[i], at(at(where, "units"), i)));
    return guarded(where, [&] { return unit_kernel(f, labels, units); });
  }
  fail(where, "expected one of entries, vectors, units");
}

FreeUnitParam parse_free_unit(TensorPowers& powers, const json& j, const std::string& where) {
  const int truncation = integer(member(j, "truncation", where), at(where, "truncation"));
  if (truncation < 1) fail(at(where, "truncation"), "must be >= 1");
  FreeUnitParam z(truncation);
  const auto& terms = array(member(j, "terms", where), at(where, "terms"));
  for (std::size_t k = 0; k < terms.size(); ++k) {
    const auto w = at(at(where, "terms"), k);
    const int n = integer(member(terms[k], "n", w), at(w, "n"));
    if (n < 1 || n > truncation) fail(at(w, "n"), "outside 1..truncation");
    IndicatorTerm term;
    const auto& box = array(member(terms[k], "box", w), at(w, "box"));
    if (box.size() != static_cast<std::size_t>(n - 1)) fail(at(w, "box"), "expected n-1 intervals");
    for (std::size_t d = 0; d < box.size(); ++d) {
      const auto wd = at(at(w, "box"), d);
      if (!box[d].is_array() || box[d].size() != 2) fail(wd, "expected [lo, hi]");
      term.box.push_back({number(box[d][0], at(wd, 0)), number(box[d][1], at(wd, 1))});
    }
    term.coeff = parse_vector(powers.power(n), member(terms[k], "coeff", w), at(w, "coeff"));
    guarded(w, [&] {
      z.add_term(n, std::move(term));
      return 0;
    });
  }
  return z;
}

json to_json(const AlgebraElement& a) {
  json out = json::array();
  for (const auto& blk : a.blocks()) {
    json flat = json::array();
    for (int r = 0; r < blk.rows(); ++r)
      for (int c = 0; c < blk.cols(); ++c) flat.push_back(complex_json(blk(r, c)));
    out.push_back(std::move(flat));
  }
  return out;
}

json to_json(const ModuleVector& x) {
  json out = json::array();
  for (const auto& e : x.entries()) out.push_back(to_json(e));
  return out;
}

json to_json(const BMatrix& m) {
  json entries = json::array();
  for (int r = 0; r < m.rows(); ++r)
    for (int c = 0; c < m.cols(); ++c) entries.push_back(to_json(m.entry(r, c)));
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"entries", std::move(entries)}};
}

json to_json(const Bimodule& f) {
  json act = json::array();
  for (const auto& a : f.action()) act.push_back(to_json(a));
  return {{"algebra", f.algebra().block_sizes()}, {"rank", f.rank()}, {"action", std::move(act)}};
}

double ExperimentConfig::tolerance(const std::string& name, double fallback) const {
  const auto it = tolerances.find(name);
  return it == tolerances.end() ? fallback : it->second;
}

ExperimentConfig parse_config(const json& j, const std::string& base_dir, const std::string& file) {
  try {
    ExperimentConfig c;
    if (!j.is_object()) fail("", "expected an object");
    if (j.contains("experiment")) {
      if (!j["experiment"].is_string()) fail("/experiment", "expected a string");
      c.experiment = j["experiment"].get<std::string>();
    }
    if (j.contains("seed")) {
      if (!j["seed"].is_number_unsigned()) fail("/seed", "expected an unsigned integer");
      c.seed = j["seed"].get<std::uint64_t>();
    }
    if (j.contains("out")) {
      if (!j["out"].is_string()) fail("/out", "expected a string");
      c.out = j["out"].get<std::string>();
    }
    if (j.contains("inputs")) {
      if (!j["inputs"].is_object()) fail("/inputs", "expected an object");
      for (const auto& [name, path] : j["inputs"].items()) {
        if (!path.is_string()) fail("/inputs/" + name, "expected a path");
        std::filesystem::path p(path.get<std::string>());
        if (p.is_relative() && !base_dir.empty()) p = std::filesystem::path(base_dir) / p;
        c.inputs[name] = p.lexically_normal().string();
      }
    }
    if (j.contains("tolerances")) {
      if (!j["tolerances"].is_object()) fail("/tolerances", "expected an object");
      for (const auto& [name, v] : j["tolerances"].items()) {
        const double x = number(v, "/tolerances/" + name);
        if (!(x > 0.0)) fail("/tolerances/" + name, "tolerances must be > 0");
        c.tolerances[name] = x;
      }
    }
    if (j.contains("params")) {
      if (!j["params"].is_object()) fail("/params", "expected an object");
      c.params = j["params"];
    }
    return c;
  } catch (const ParseError& e) {
    throw e.in_file(file);
  }
}

ExperimentConfig load_config(const std::string& path) {
  return parse_config(load_json(path), std::filesystem::path(path).parent_path().string(), path);
}

}  // namespace prodsys::io
