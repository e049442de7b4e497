#include <gtest/gtest.h>

#include <sstream>

#include "eipsynth/cli/cli.hpp"
#include "eipsynth/json_util.hpp"
#include "support.hpp"

using namespace eipsynth;
using eipsynth::testkit::fixture;
using eipsynth::testkit::TempDir;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome call(std::vector<std::string> args, const std::string& input = "")
{
    args.insert(args.begin(), "eipsynth");
    std::istringstream in(input);
    std::ostringstream out, err;
    int code = cli::run(args, in, out, err);
    return {code, out.str(), err.str()};
}

Outcome call(const fs::path& config, const fs::path& out, std::vector<std::string> rest, const std::string& input = "")
{
    std::vector<std::string> args{"--config", config.string(), "--out", out.string()};
    args.insert(args.end(), rest.begin(), rest.end());
    return call(args, input);
}

/// Relative path -> contents of every regular file below `root`.
std::map<std::string, std::string> snapshot(const fs::path& root)
{
    std::map<std::string, std::string> files;
    for (const auto& e : fs::recursive_directory_iterator(root))
        if (e.is_regular_file())
            files[fs::relative(e.path(), root).string()] = read_file(e.path());
    return files;
}

const fs::path kInstore = fixture("instore/project.json");

} // namespace

TEST(Cli, GoldenPipelineSucceeds)
{
    TempDir tmp("cli-golden");
    EXPECT_EQ(call(kInstore, tmp.path(), {"infer"}).code, cli::Ok);
    EXPECT_TRUE(fs::exists(tmp.path() / "mappings.json"));
    auto synth = call(kInstore, tmp.path(), {"synthesize"});
    EXPECT_EQ(synth.code, cli::Ok) << synth.err;
    EXPECT_TRUE(fs::exists(tmp.path() / "adapters" / "Adapter_Client_CD_Client_SmartCart.json"));
    EXPECT_TRUE(fs::exists(tmp.path() / "adapters" / "Adapter_SmartCart_CD_Client_SmartCart.json"));
    EXPECT_TRUE(fs::exists(tmp.path() / "cds" / "CD_Client_SmartCart.json"));
    EXPECT_EQ(call(kInstore, tmp.path(), {"enact"}).code, cli::Ok);
    EXPECT_TRUE(fs::exists(tmp.path() / "trace.jsonl"));
    EXPECT_EQ(call(kInstore, tmp.path(), {"verify"}).code, cli::Ok);

    auto report = Json::parse(read_file(tmp.path() / "conformance.json"));
    EXPECT_EQ(report["verdict"], "conformant");
}

TEST(Cli, MaliciousScenarioOnlyFailsWithoutEnforcement)
{
    TempDir tmp("cli-malicious");
    auto scenario = fixture("instore/scenarios/malicious.json").string();
    ASSERT_EQ(call(kInstore, tmp.path(), {"infer"}).code, cli::Ok);
    ASSERT_EQ(call(kInstore, tmp.path(), {"synthesize"}).code, cli::Ok);
    EXPECT_EQ(call(kInstore, tmp.path(), {"--scenario", scenario, "verify"}).code, cli::Ok);
    EXPECT_EQ(call(kInstore, tmp.path(), {"--scenario", scenario, "--bypass-enforcement", "verify"}).code,
              cli::Violations);
    auto report = Json::parse(read_file(tmp.path() / "conformance.json"));
    EXPECT_EQ(report["verdict"], "violating");
    EXPECT_EQ(report["violations"].size(), 1u);
}

TEST(Cli, ExitCodesForFailures)
{
    TempDir tmp("cli-codes");
    EXPECT_EQ(call(kInstore, tmp.path() / "a", {"synthesize"}).code, cli::Failure);
    EXPECT_EQ(call(tmp.path() / "missing.json", tmp.path() / "b", {"infer"}).code, cli::Failure);
    EXPECT_EQ(call({"--config", kInstore.string(), "launch"}).code, cli::Failure);
    EXPECT_EQ(call(kInstore, tmp.path() / "c", {"enact"}).code, cli::Failure);

    auto no_quantity = fixture("no_quantity/project.json");
    EXPECT_EQ(call(no_quantity, tmp.path() / "d", {"infer"}).code, cli::Ok);
    auto synth = call(no_quantity, tmp.path() / "d", {"synthesize"});
    EXPECT_EQ(synth.code, cli::Unsatisfiable);
    EXPECT_NE(synth.err.find("#quantity"), std::string::npos);

    auto tie = fixture("tie/project.json");
    EXPECT_EQ(call(tie, tmp.path() / "e", {"infer"}).code, cli::Ambiguous);
    EXPECT_EQ(call(tie, tmp.path() / "e", {"synthesize"}).code, cli::Ambiguous);
}

TEST(Cli, ConfirmWritesHintsThatResolveTheTie)
{
    TempDir tmp("cli-confirm");
    auto project = tmp.path() / "tie";
    fs::copy(fixture("tie"), project, fs::copy_options::recursive);
    fs::remove_all(project / "out");
    fs::remove(project / "hints.txt");
    auto config = project / "project.json";

    EXPECT_EQ(call(config, project / "out", {"confirm"}, "").code, cli::Ambiguous);
    auto answered = call(config, project / "out", {"confirm"}, "2\n");
    EXPECT_EQ(answered.code, cli::Ok) << answered.err;
    ASSERT_TRUE(fs::exists(project / "hints.txt"));
    auto hints = mapping::parse_hints(read_file(project / "hints.txt"));
    EXPECT_FALSE(hints.empty());

    EXPECT_EQ(call(config, project / "out", {"infer"}).code, cli::Ok);
    EXPECT_EQ(call(config, project / "out", {"synthesize"}).code, cli::Ok);
}

TEST(Cli, RerunsAreByteIdentical)
{
    TempDir tmp("cli-determinism");
    for (const char* run : {"one", "two"}) {
        auto out = tmp.path() / run;
        for (const char* cmd : {"infer", "synthesize", "verify"})
            ASSERT_EQ(call(kInstore, out, {"--seed", "5", cmd}).code, cli::Ok) << cmd;
    }
    auto one = snapshot(tmp.path() / "one");
    EXPECT_GE(one.size(), 8u);
    EXPECT_EQ(one, snapshot(tmp.path() / "two"));
}
