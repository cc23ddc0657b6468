#ifndef IPFACTOR_CLI_JSON_IO_HPP
#define IPFACTOR_CLI_JSON_IO_HPP

// JSON documents read and written by the command-line tool.
//
// Complex numbers are [re, im] pairs and matrices are row-major lists of rows.
// Supermatrices use the column-stacking vec convention, recorded in every
// document as "vec": "column". Output is canonical: object keys sorted,
// floating-point numbers printed with 17 significant digits.

#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

#include "ipfactor/certificate.hpp"
#include "ipfactor/error.hpp"

namespace ipfactor::cli {

using Json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

/// Unreadable file, malformed JSON or a document that violates its schema.
class ParseError : public Error {
 public:
  using Error::Error;
};

struct ProblemSpec {
  int dim = 0;
  std::string form;  // "supermat" or "opsum"
  SuperMat target{1, CMat::Zero(1, 1)};
  std::optional<OpSum> pairs;  // present for "opsum" documents
  std::optional<std::int64_t> seed;
  Json doc;
};

Json matrix_to_json(const CMat& m);
CMat matrix_from_json(const Json& j, int rows, int cols, const std::string& where);

ProblemSpec parse_problem(const Json& doc);
ProblemSpec load_problem(const std::string& path);

Json problem_json(const OpSum& pairs, std::optional<std::int64_t> seed = std::nullopt);
Json problem_json(const SuperMat& target);

/// Compact when `pretty` is false; the compact form is what gets hashed.
std::string canonical_dump(const Json& j, bool pretty = false);

/// SHA-256 hex digest of the compact canonical dump.
std::string problem_hash(const Json& doc);

struct CertificateDoc {
  Certificate cert;
  std::string problem_hash;
  std::string tool;
};

Json certificate_json(const Certificate& cert, const std::string& problem_hash);
CertificateDoc parse_certificate(const Json& doc);

Json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

std::string tool_version();

}  // namespace ipfactor::cli

#endif
