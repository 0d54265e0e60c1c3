// Copyright 2026 The qdsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#ifndef QDSIM_RUNNER_HPP
#define QDSIM_RUNNER_HPP

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>

#include "qdsim/adversary.hpp"
#include "qdsim/analysis.hpp"
#include "qdsim/protocol.hpp"
#include "qdsim/transcript.hpp"

namespace qdsim {

/// Process exit codes of the qdsim tool.
enum ExitCode : int {
    kExitOk = 0,
    kExitConfigError = 1,
    kExitIdentityFailure = 2,
    kExitIoError = 3,
};

/// File could not be read or written.
class IoError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

enum class OutputFormat { json, csv };

std::string to_string(OutputFormat f);
OutputFormat parse_output_format(std::string_view s);

struct RunConfig {
    ProtocolConfig protocol;
    AttackSpec attack;
    std::size_t trials = 10;
    OutputFormat format = OutputFormat::json;
    /// Empty: write the document to stdout.
    std::optional<std::string> out_path;
    bool introspect = false;
    /// Set when the encoding was chosen explicitly (verify filters on it).
    bool encoding_explicit = false;
    /// report: transcript document to analyze instead of a synthesized one.
    std::optional<std::string> transcript_path;
    /// report: disclose Alice's initial bits in the synthesized transcript.
    bool counterfactual_public_m = false;

    /// Throws ConfigError.
    void validate() const;
    Json to_json() const;
};

/// Settings that can come from a config document or from command-line
/// flags. Unset fields leave the underlying value alone.
struct ConfigOverrides {
    std::optional<std::string> encoding;
    std::optional<std::size_t> n;
    std::optional<std::size_t> delta1;
    std::optional<std::size_t> decoys;
    std::optional<double> theta_key;
    std::optional<std::string> noise;
    std::optional<std::string> noise_law;
    std::optional<std::string> attack;
    std::optional<std::string> attack_direction;
    std::optional<std::string> substitution;
    std::optional<std::string> ancilla_scope;
    std::optional<int> ancilla_control;
    std::optional<std::size_t> trials;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> format;
    std::optional<std::string> out;
    std::optional<bool> introspect;
    std::optional<bool> encrypt;
    std::optional<std::string> transcript;
    std::optional<bool> counterfactual_public_m;
};

/// Reads overrides from a config document. Keys use the long flag names
/// with '-' replaced by '_' (e.g. "theta_key", "noise_law"). Unknown keys
/// and ill-typed values throw ConfigError.
ConfigOverrides overrides_from_json(const Json& doc);

/// Layers defaults < config file < flags. The seed falls back to
/// `env_seed` (the QDSIM_SEED value) when neither file nor flags set it.
/// When no noise is given the encoding's matching collective channel is
/// used. Throws ConfigError.
RunConfig build_run_config(const std::optional<ConfigOverrides>& file, const ConfigOverrides& flags,
                           const char* env_seed);

/// Parses a JSON file; IoError if unreadable, ConfigError if malformed.
Json read_json_file(const std::string& path);

/// Report documents. Deterministic for a fixed RunConfig.
Json dialogue_document(const RunConfig& cfg);
Json attack_document(const RunConfig& cfg);
Json verify_document(const RunConfig& cfg);
Json report_document(const RunConfig& cfg);

/// CSV renderings of the documents above (first line names the schema).
std::string dialogue_csv(const Json& doc);
std::string attack_csv(const Json& doc);
std::string verify_csv(const Json& doc);
std::string report_csv(const Json& doc);

enum class Command { dialogue, attack, verify, report };

std::string to_string(Command c);

/// Builds the document, writes it (json or csv) to cfg.out_path or
/// `stdout_stream`, prints a short summary to `log`, and returns the exit
/// code. Config and I/O failures are mapped to their exit codes.
int run_command(Command cmd, const RunConfig& cfg, std::ostream& stdout_stream, std::ostream& log);

}  // namespace qdsim

#endif  // QDSIM_RUNNER_HPP
