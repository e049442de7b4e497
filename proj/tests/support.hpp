#pragma once

#include <filesystem>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "eipsynth/cli/cli.hpp"
#include "eipsynth/enactment/harness.hpp"
#include "eipsynth/mapping/inference.hpp"
#include "eipsynth/synthesis/adapter.hpp"
#include "eipsynth/synthesis/cd.hpp"

namespace eipsynth::testkit {

namespace fs = std::filesystem;

inline fs::path fixture(const std::string& rel)
{
    return fs::path(FIXTURES_DIR) / rel;
}

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& tag);
    ~TempDir();
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const fs::path& path() const { return path_; }

private:
    fs::path path_;
};

/// Everything the pipeline derives from one project file, computed in memory.
struct Project {
    synthesis::ChoreographySpec choreo;
    std::map<std::string, synthesis::ServiceDescription> bindings;
    std::vector<synthesis::CDSpec> cds;
    std::vector<synthesis::Attachment> attachments;
    std::vector<mapping::MappingReport> reports;
    /// Non-passthrough adapters, in attachment order.
    std::vector<synthesis::AdapterSpec> adapters;

    const mapping::MappingReport& report(const std::string& service, const std::string& cd) const;
    const synthesis::AdapterSpec& adapter(const std::string& service) const;
};

/// Stops after inference when `synthesize` is false.
Project load_project(const fs::path& project_json, bool synthesize = true);

enactment::Harness golden_harness(const Project& p, const fs::path& scenario, bool bypass = false,
                                  std::uint64_t seed = 7);

// Random generators shared by the property suites.

schema::MessageSchema random_schema(std::mt19937_64& rng, const schema::QName& qname, std::size_t max_leaves);
Json random_payload(std::mt19937_64& rng, const schema::MessageSchema& schema);

} // namespace eipsynth::testkit
