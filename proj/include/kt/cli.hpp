// Command-line driver: subcommands over the library, deterministic text
// reports with a line-delimited JSON mirror.
#pragma once

#include <json.hpp>

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace kt::cli {

enum ExitCode : int { kOk = 0, kPropertyFailure = 1, kInputError = 2 };

struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Ordered records, the first of which is the run configuration. Text lines
/// are `<type> key=value ...` with keys sorted; values are JSON.
class Report {
public:
    explicit Report(nlohmann::json config);

    void add(nlohmann::json record);
    const nlohmann::json& config() const { return records_.front(); }
    const std::vector<nlohmann::json>& records() const { return records_; }

    std::string text() const;
    std::string jsonl() const;

private:
    std::vector<nlohmann::json> records_;
};

/// Worker count from KT_WORKERS, 0 (OpenMP default) when unset or invalid.
int default_workers();

/// Runs one command line without the program name. Reports go to `out`
/// unless --out names a file (then FILE and FILE.jsonl are written);
/// diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace kt::cli
