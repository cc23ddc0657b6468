#include "ipfactor/cli/json_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <openssl/evp.h>

#ifndef IPFACTOR_VERSION
#define IPFACTOR_VERSION "unknown"
#endif

namespace ipfactor::cli {

namespace {

Complex complex_from_json(const Json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw ParseError(where + ": expected a [re, im] pair");
  }
  Complex z(j[0].get<double>(), j[1].get<double>());
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) throw ParseError(where + ": non-finite entry");
  return z;
}

Json complex_to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

const Json& field(const Json& doc, const char* name) {
  auto it = doc.find(name);
  if (it == doc.end()) throw ParseError(std::string("missing field '") + name + "'");
  return *it;
}

int int_field(const Json& doc, const char* name) {
  const Json& v = field(doc, name);
  if (!v.is_number_integer()) throw ParseError(std::string("field '") + name + "' must be an integer");
  return v.get<int>();
}

void require_version(const Json& doc) {
  if (!doc.is_object()) throw ParseError("document must be a JSON object");
  if (int_field(doc, "version") != kSchemaVersion) {
    throw ParseError("unsupported schema version (expected " + std::to_string(kSchemaVersion) + ")");
  }
  auto vec = doc.find("vec");
  if (vec != doc.end() && *vec != "column") throw ParseError("only the column-stacking vec convention is supported");
}

std::string format_double(double x) {
  if (!std::isfinite(x)) throw InvalidArgument("canonical JSON cannot hold non-finite numbers");
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

bool is_flat(const Json& j) {
  for (const Json& e : j)
    if (e.is_array() || e.is_object()) {
      if (!e.is_array()) return false;
      for (const Json& inner : e)
        if (inner.is_array() || inner.is_object()) return false;
    }
  return true;
}

void dump(const Json& j, std::string& out, int indent, bool pretty) {
  auto newline = [&](int level) {
    if (!pretty) return;
    out += '\n';
    out.append(static_cast<std::size_t>(2 * level), ' ');
  };
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ',';
        first = false;
        newline(indent + 1);
        out += Json(it.key()).dump();
        out += pretty ? ": " : ":";
        dump(it.value(), out, indent + 1, pretty);
      }
      newline(indent);
      out += '}';
      return;
    }
    case Json::value_t::array: {
      // Rows of [re, im] pairs stay on one line when pretty-printing.
      const bool inline_row = !pretty || is_flat(j);
      out += '[';
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i > 0) out += inline_row && pretty ? ", " : ",";
        if (!inline_row) newline(indent + 1);
        dump(j[i], out, indent + 1, inline_row ? false : pretty);
      }
      if (!inline_row && !j.empty()) newline(indent);
      out += ']';
      return;
    }
    case Json::value_t::number_float:
      out += format_double(j.get<double>());
      return;
    default:
      out += j.dump();
      return;
  }
}

std::string sha256_hex(const std::string& text) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(text.data(), text.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw Error("SHA-256 digest failed");
  }
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 0xf];
  }
  return out;
}

Json doubles(const std::vector<double>& v) { return Json(v); }

std::vector<double> doubles_from(const Json& ledger, const char* name) {
  auto it = ledger.find(name);
  if (it == ledger.end()) return {};
  if (!it->is_array()) throw ParseError(std::string("ledger field '") + name + "' must be an array");
  std::vector<double> out;
  for (const Json& x : *it) {
    if (!x.is_number()) throw ParseError(std::string("ledger field '") + name + "' must hold numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

std::optional<double> optional_from(const Json& ledger, const char* name) {
  auto it = ledger.find(name);
  if (it == ledger.end() || it->is_null()) return std::nullopt;
  if (!it->is_number()) throw ParseError(std::string("ledger field '") + name + "' must be a number");
  return it->get<double>();
}

Json ledger_json(const ShiftLedger& l) {
  Json j = {{"alpha", doubles(l.alpha)}, {"beta", doubles(l.beta)},           {"gamma", doubles(l.gamma)},
            {"eta", doubles(l.eta)},     {"xi", doubles(l.xi)},               {"t0", l.t0},
            {"eps_backoff", l.eps_backoff}, {"probes_used", l.probes_used}};
  if (l.alpha_shift) j["alpha_shift"] = *l.alpha_shift;
  if (l.t0_second) j["t0_second"] = *l.t0_second;
  if (l.eps_second) j["eps_second"] = *l.eps_second;
  return j;
}

ShiftLedger ledger_from(const Json& j) {
  if (!j.is_object()) throw ParseError("ledger must be an object");
  ShiftLedger l;
  l.alpha = doubles_from(j, "alpha");
  l.beta = doubles_from(j, "beta");
  l.gamma = doubles_from(j, "gamma");
  l.eta = doubles_from(j, "eta");
  l.xi = doubles_from(j, "xi");
  l.t0 = optional_from(j, "t0").value_or(0.0);
  l.eps_backoff = optional_from(j, "eps_backoff").value_or(0.0);
  l.alpha_shift = optional_from(j, "alpha_shift");
  l.t0_second = optional_from(j, "t0_second");
  l.eps_second = optional_from(j, "eps_second");
  l.probes_used = static_cast<int>(optional_from(j, "probes_used").value_or(0.0));
  return l;
}

}  // namespace

Json matrix_to_json(const CMat& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(complex_to_json(m(i, k)));
    rows.push_back(std::move(row));
  }
  return rows;
}

CMat matrix_from_json(const Json& j, int rows, int cols, const std::string& where) {
  if (!j.is_array() || static_cast<int>(j.size()) != rows) {
    throw ParseError(where + ": expected " + std::to_string(rows) + " rows");
  }
  CMat m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    const Json& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<int>(row.size()) != cols) {
      throw ParseError(where + ": row " + std::to_string(i) + " must have " + std::to_string(cols) + " entries");
    }
    for (int k = 0; k < cols; ++k) m(i, k) = complex_from_json(row[static_cast<std::size_t>(k)], where);
  }
  return m;
}

ProblemSpec parse_problem(const Json& doc) {
  require_version(doc);
  ProblemSpec spec;
  spec.doc = doc;
  spec.dim = int_field(doc, "dim");
  if (spec.dim < 1) throw ParseError("dim must be positive");
  const Json& form = field(doc, "form");
  if (!form.is_string()) throw ParseError("form must be a string");
  spec.form = form.get<std::string>();
  const int n = spec.dim;
  const Json& data = field(doc, "data");

  if (spec.form == "supermat") {
    spec.target = SuperMat(n, matrix_from_json(data, n * n, n * n, "data"));
  } else if (spec.form == "opsum") {
    if (!data.is_array()) throw ParseError("data must be a list of {E, F} terms");
    std::vector<Pair> pairs;
    for (std::size_t i = 0; i < data.size(); ++i) {
      const Json& term = data[i];
      const std::string where = "data[" + std::to_string(i) + "]";
      if (!term.is_object()) throw ParseError(where + ": expected an object with E and F");
      pairs.push_back({matrix_from_json(field(term, "E"), n, n, where + ".E"),
                       matrix_from_json(field(term, "F"), n, n, where + ".F")});
    }
    OpSum s(n, std::move(pairs));
    spec.target = to_supermat(s);
    spec.pairs = std::move(s);
  } else {
    throw ParseError("form must be \"supermat\" or \"opsum\"");
  }

  auto seed = doc.find("seed");
  if (seed != doc.end()) {
    if (!seed->is_number_integer()) throw ParseError("seed must be an integer");
    spec.seed = seed->get<std::int64_t>();
  }
  return spec;
}

ProblemSpec load_problem(const std::string& path) { return parse_problem(read_json_file(path)); }

Json problem_json(const OpSum& pairs, std::optional<std::int64_t> seed) {
  Json data = Json::array();
  for (const Pair& p : pairs.pairs()) data.push_back({{"E", matrix_to_json(p.left)}, {"F", matrix_to_json(p.right)}});
  Json doc = {{"version", kSchemaVersion}, {"dim", pairs.dim()}, {"form", "opsum"}, {"vec", "column"}, {"data", data}};
  if (seed) doc["seed"] = *seed;
  return doc;
}

Json problem_json(const SuperMat& target) {
  return {{"version", kSchemaVersion},
          {"dim", target.dim()},
          {"form", "supermat"},
          {"vec", "column"},
          {"data", matrix_to_json(target.mat())}};
}

std::string canonical_dump(const Json& j, bool pretty) {
  std::string out;
  dump(j, out, 0, pretty);
  if (pretty) out += '\n';
  return out;
}

std::string problem_hash(const Json& doc) { return sha256_hex(canonical_dump(doc)); }

Json certificate_json(const Certificate& cert, const std::string& hash) {
  Json pairs = Json::array();
  for (const Pair& p : cert.pairs.pairs()) pairs.push_back({{"A", matrix_to_json(p.left)}, {"B", matrix_to_json(p.right)}});
  return {{"version", kSchemaVersion},
          {"problem_hash", hash},
          {"form", std::string(to_string(cert.form))},
          {"dim", cert.pairs.dim()},
          {"vec", "column"},
          {"signs", cert.signs},
          {"pairs", pairs},
          {"residual", cert.residual},
          {"margins", cert.margins},
          {"ledger", ledger_json(cert.ledger)},
          {"tool", tool_version()}};
}

CertificateDoc parse_certificate(const Json& doc) {
  require_version(doc);
  CertificateDoc out;
  const Json& hash = field(doc, "problem_hash");
  if (!hash.is_string()) throw ParseError("problem_hash must be a string");
  out.problem_hash = hash.get<std::string>();
  if (auto tool = doc.find("tool"); tool != doc.end() && tool->is_string()) out.tool = tool->get<std::string>();

  const int n = int_field(doc, "dim");
  if (n < 1) throw ParseError("dim must be positive");
  const Json& form = field(doc, "form");
  if (!form.is_string()) throw ParseError("form must be a string");
  try {
    out.cert.form = form_from_string(form.get<std::string>());
  } catch (const InvalidArgument& e) {
    throw ParseError(e.what());
  }

  const Json& pairs = field(doc, "pairs");
  if (!pairs.is_array()) throw ParseError("pairs must be a list");
  std::vector<Pair> terms;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const std::string where = "pairs[" + std::to_string(i) + "]";
    if (!pairs[i].is_object()) throw ParseError(where + ": expected an object with A and B");
    terms.push_back({matrix_from_json(field(pairs[i], "A"), n, n, where + ".A"),
                     matrix_from_json(field(pairs[i], "B"), n, n, where + ".B")});
  }
  out.cert.pairs = OpSum(n, std::move(terms));

  const Json& signs = field(doc, "signs");
  if (!signs.is_array()) throw ParseError("signs must be a list");
  for (const Json& s : signs) {
    if (!s.is_number_integer()) throw ParseError("signs must be integers");
    out.cert.signs.push_back(s.get<int>());
  }
  if (auto r = doc.find("residual"); r != doc.end() && r->is_number()) out.cert.residual = r->get<double>();
  if (auto m = doc.find("margins"); m != doc.end()) out.cert.margins = doubles_from(doc, "margins");
  if (auto l = doc.find("ledger"); l != doc.end()) out.cert.ledger = ledger_from(*l);
  return out;
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot read " + path);
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ParseError(path + ": " + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write " + path);
  out << text;
  if (!out) throw ParseError("write failed for " + path);
}

std::string tool_version() { return std::string("ipfactor ") + IPFACTOR_VERSION; }

}  // namespace ipfactor::cli
