#ifndef IPFACTOR_CLI_COMMANDS_HPP
#define IPFACTOR_CLI_COMMANDS_HPP

#include <cstdint>
#include <ostream>
#include <string>

namespace ipfactor::cli {

/// Process exit codes shared by every subcommand.
enum Exit : int {
  kOk = 0,
  kFailed = 1,        // semantic failure: not an inner product, failed check
  kParse = 2,         // I/O, parse, usage or hash mismatch
  kNotAchieved = 3,   // requested form not achieved
  kNumerical = 4,     // numerical failure
};

int cmd_validate(const std::string& spec_path, std::ostream& out);

/// `form` is one of opsum, hermitian, positive, minus-one, auto. An empty
/// `out_path` prints the certificate to `out`.
int cmd_decompose(const std::string& spec_path, const std::string& form, const std::string& out_path,
                  std::ostream& out);

int cmd_verify(const std::string& cert_path, const std::string& spec_path, std::ostream& out);

int cmd_demo(double epsilon, std::ostream& out);

/// An empty `out_path` prints the spec to `out`.
int cmd_random(int n, int m, std::uint64_t seed, const std::string& out_path, std::ostream& out);

}  // namespace ipfactor::cli

#endif
