// Copyright 2026 The ssr-telescopy Authors
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

// Command-line front end: reproducible tables, figures and JSON reports.

#ifndef SSRT_CLI_H
#define SSRT_CLI_H

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ssrt/qfi.h"

namespace ssrt {

class IoError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

enum class OutputFormat { csv, json, svg };

std::string to_string(OutputFormat f);
OutputFormat parse_output_format(const std::string& name);

struct RunConfig {
    std::string command;
    std::string ancilla = "klm";
    /// Path to a custom-spec JSON file, used when ancilla == "custom".
    std::string ancilla_file;
    int photons = 4;
    std::optional<double> mean_photons;
    SourceParams source{1e-3, 0.7, 0.3};
    std::int64_t samples = 100000;
    int repetitions = 200;
    std::uint64_t seed = 1;
    OutputFormat format = OutputFormat::csv;
    std::string out;

    /// Throws InvalidArgument on out-of-range values.
    void validate() const;
    std::string to_json() const;
    static RunConfig from_json(const std::string& text);
};

inline const std::vector<std::string>& cli_commands() {
    static const std::vector<std::string> c = {"table1", "fig2", "teleport", "estimate", "optimize", "bound"};
    return c;
}

/// Rendered command output.
std::string run_command(const RunConfig& cfg);

/// Formats a double with 12 significant digits.
std::string format_number(double x);

/// Full CLI: parses argv, runs, writes output. Returns 0 on success, 2 on a
/// validation error, 1 on an I/O error.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ssrt

#endif  // SSRT_CLI_H
