#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace eipsynth::cli {

namespace fs = std::filesystem;

/// Exit-code contract shared by every command.
enum ExitCode : int {
    Ok = 0,
    Failure = 1,       ///< parse, wiring, missing-artifact and I/O errors
    Unsatisfiable = 2, ///< a target leaf has no source
    Ambiguous = 3,     ///< mappings still need confirmation
    Violations = 4,    ///< the trace deviates from the choreography
};

/// `project.json`; relative paths resolve against the file's directory.
/// `{"choreography", "bindings": {role: interface}, "hints"?, "scenario"?, "out"?, "seed"?, "verbosity"?}`
struct ProjectConfig {
    fs::path choreography;
    std::map<std::string, fs::path> bindings;
    /// Read when present; `confirm` creates it.
    std::optional<fs::path> hints;
    std::optional<fs::path> scenario;
    fs::path out;
    std::uint64_t seed = 0;
    int verbosity = 0;
};

/// Throws ParseError for malformed documents and Error for missing files.
ProjectConfig load_config(const fs::path& path);

/// Command-line overrides applied on top of the config file.
struct Overrides {
    std::optional<std::uint64_t> seed;
    std::optional<fs::path> out;
    std::optional<fs::path> scenario;
    bool bypass_enforcement = false;
};

ProjectConfig apply(ProjectConfig config, const Overrides& overrides);

/// Each command writes its artifacts under `config.out` and returns an ExitCode.
int cmd_infer(const ProjectConfig& config, std::ostream& out, std::ostream& err);
int cmd_confirm(const ProjectConfig& config, std::istream& in, std::ostream& out, std::ostream& err);
int cmd_synthesize(const ProjectConfig& config, std::ostream& out, std::ostream& err);
int cmd_enact(const ProjectConfig& config, bool bypass_enforcement, std::ostream& out, std::ostream& err);
int cmd_verify(const ProjectConfig& config, bool bypass_enforcement, std::ostream& out, std::ostream& err);

/// Full command line, `argv[0]` included.
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

} // namespace eipsynth::cli
