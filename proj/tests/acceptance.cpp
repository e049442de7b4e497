// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>

#include "eipsynth/cli/cli.hpp"
#include "eipsynth/enactment/conformance.hpp"
#include "eipsynth/json_util.hpp"
#include "eipsynth/patterns/message.hpp"
#include "properties.hpp"
#include "support.hpp"

using namespace eipsynth;
using eipsynth::testkit::fixture;
using eipsynth::testkit::TempDir;
namespace fs = std::filesystem;

namespace {

/// Collects the first mismatch of a criterion.
struct Check {
    std::string failure;

    void expect(bool ok, const std::string& what)
    {
        if (!ok && failure.empty())
            failure = what;
    }
    bool ok() const { return failure.empty(); }
};

int cli_run(const fs::path& config, const fs::path& out, std::vector<std::string> extra, const std::string& cmd)
{
    std::vector<std::string> args{"eipsynth", "--config", config.string(), "--out", out.string()};
    args.insert(args.end(), extra.begin(), extra.end());
    args.push_back(cmd);
    std::istringstream in;
    std::ostringstream sink;
    return cli::run(args, in, sink, sink);
}

const fs::path kProject = fixture("instore/project.json");
const std::string kMalicious = fixture("instore/scenarios/malicious.json").string();

Json file_json(const fs::path& p)
{
    return Json::parse(read_file(p));
}

std::vector<Json> jsonl(const fs::path& p)
{
    std::vector<Json> out;
    std::istringstream lines(read_file(p));
    for (std::string line; std::getline(lines, line);)
        if (!line.empty())
            out.push_back(Json::parse(line));
    return out;
}

Json pm(std::initializer_list<std::pair<const char*, const char*>> pairs)
{
    Json out = Json::array();
    for (const auto& [s, t] : pairs)
        out.push_back(Json::array({s, t}));
    return out;
}

void criterion1(Check& c, const fs::path& out)
{
    c.expect(cli_run(kProject, out, {}, "infer") == cli::Ok, "infer did not exit 0");
    auto doc = file_json(out / "mappings.json");
    std::set<std::string> mappings, correspondences;
    std::set<std::string> unmapped;
    for (const auto& r : doc["reports"]) {
        for (const auto& m : r["mappings"]) {
            mappings.insert(m["sub"].get<std::string>() + " <= " + m["sup"].get<std::string>());
            for (const auto& x : m["correspondences"])
                correspondences.insert(m["sub"].get<std::string>() + "#" + x["source"].get<std::string>() + " -> " +
                                       x["target"].get<std::string>());
        }
        for (const auto& u : r["unmapped"])
            unmapped.insert(u.get<std::string>());
        c.expect(r["ambiguities"].empty(), "unexpected ambiguity");
    }
    const std::string cd = "CD_Client_SmartCart.addProduct.addProductRequest";
    c.expect(mappings == std::set<std::string>{"Client.addProduct.addProductRequest <= " + cd,
                                               "Client.setQuantity.setQuantityRequest <= " + cd,
                                               "SmartCart.addItem.addItemRequest <= " + cd,
                                               "SmartCart.setAmount.setAmountRequest <= " + cd},
             "mapping set differs (" + std::to_string(mappings.size()) + " found)");
    c.expect(correspondences ==
                 std::set<std::string>{"Client.addProduct.addProductRequest#product.id -> product.id",
                                       "Client.addProduct.addProductRequest#product.description -> product.description",
                                       "Client.setQuantity.setQuantityRequest#quantity -> quantity",
                                       "SmartCart.addItem.addItemRequest#item.itemCode -> product.id",
                                       "SmartCart.addItem.addItemRequest#item.descr -> product.description",
                                       "SmartCart.setAmount.setAmountRequest#amount -> quantity"},
             "correspondence set differs (" + std::to_string(correspondences.size()) + " found)");
    c.expect(unmapped == std::set<std::string>{"Client.setPromotionCode.setPromotionCodeRequest"},
             "unmapped set differs");
}

void criterion2(Check& c, const fs::path& out)
{
    c.expect(cli_run(kProject, out, {}, "synthesize") == cli::Ok, "synthesize did not exit 0");
    std::vector<std::string> adapters;
    for (const auto& e : fs::directory_iterator(out / "adapters"))
        if (e.path().extension() == ".json")
            adapters.push_back(e.path().filename().string());
    std::sort(adapters.begin(), adapters.end());
    c.expect(adapters == std::vector<std::string>{"Adapter_Client_CD_Client_SmartCart.json",
                                                  "Adapter_SmartCart_CD_Client_SmartCart.json"},
             "unexpected adapter set");
    if (!c.ok())
        return;

    Json adapter1 = Json::array(
        {Json{{"pattern", "MessageFilter"}, {"dropSet", {"Client.setPromotionCode.setPromotionCodeRequest"}}},
         Json{{"pattern", "Aggregator"},
              {"expected", {"Client.addProduct.addProductRequest", "Client.setQuantity.setQuantityRequest"}},
              {"target", "CD_Client_SmartCart.addProduct.addProductRequest"},
              {"correlation", {{"kind", "header"}}},
              {"mergeMap",
               {{"Client.addProduct.addProductRequest",
                 pm({{"product.id", "product.id"}, {"product.description", "product.description"}})},
                {"Client.setQuantity.setQuantityRequest", pm({{"quantity", "quantity"}})}}}}});
    Json adapter2 = Json::array(
        {Json{{"pattern", "Splitter"},
              {"source", "CD_Client_SmartCart.addProduct.addProductRequest"},
              {"parts",
               {Json{{"target", "SmartCart.addItem.addItemRequest"},
                     {"pathMap", pm({{"product.id", "item.itemCode"}, {"product.description", "item.descr"}})}},
                Json{{"target", "SmartCart.setAmount.setAmountRequest"}, {"pathMap", pm({{"quantity", "amount"}})}}}}},
         Json{{"pattern", "Resequencer"},
              {"order", {"SmartCart.setAmount.setAmountRequest", "SmartCart.addItem.addItemRequest"}},
              {"releasePolicy", "strict"}}});

    auto a1 = file_json(out / "adapters" / adapters[0]);
    auto a2 = file_json(out / "adapters" / adapters[1]);
    c.expect(a1["flows"].size() == 1 && a1["flows"][0]["chain"] == adapter1, "Adapter1 chain differs");
    c.expect(a2["flows"].size() == 1 && a2["flows"][0]["chain"] == adapter2, "Adapter2 chain differs");
}

void criterion3(Check& c, const fs::path& out)
{
    c.expect(cli_run(kProject, out, {}, "verify") == cli::Ok, "verify did not exit 0");
    Json amount{{"amount", 3}};
    Json item = Json::parse(R"({"item": {"itemCode": "p1", "descr": "milk"}})");
    std::vector<std::pair<std::string, std::string>> seen;
    for (const auto& e : jsonl(out / "trace.jsonl"))
        if (e["kind"] == "delivered" && e["to"] == "SmartCart" && e["operation"] != "checkout")
            seen.emplace_back(e["operation"], e["payloadDigest"]);
    c.expect(seen.size() == 2 && seen[0] == std::pair<std::string, std::string>{"setAmount", patterns::payload_digest(amount)} &&
                 seen[1] == std::pair<std::string, std::string>{"addItem", patterns::payload_digest(item)},
             "trace deliveries to SmartCart differ");

    // The trace only holds digests, so the values are also checked on the stub itself.
    auto project = testkit::load_project(kProject);
    auto harness = testkit::golden_harness(project, fixture("instore/scenarios/golden.json"));
    enactment::enact(harness);
    const auto& inbox = harness.stubs.at("SmartCart").inbox;
    // The scenario ends with a checkout; everything before it comes from the three sends.
    c.expect(inbox.size() == 3 && inbox[0].qname.str() == "SmartCart.setAmount.setAmountRequest" &&
                 inbox[0].payload == amount && inbox[1].qname.str() == "SmartCart.addItem.addItemRequest" &&
                 inbox[1].payload == item && inbox[2].qname.str() == "SmartCart.checkout.checkoutRequest",
             "SmartCart inbox differs");
}

void criterion4(Check& c, const fs::path& out)
{
    c.expect(cli_run(kProject, out, {"--scenario", kMalicious}, "verify") == cli::Ok, "enforced verify did not exit 0");
    std::size_t blocked = 0;
    for (const auto& e : jsonl(out / "trace.jsonl"))
        blocked += e["kind"] == "blocked" ? 1 : 0;
    c.expect(blocked == 1, std::to_string(blocked) + " blocked events instead of 1");
    c.expect(cli_run(kProject, out, {"--scenario", kMalicious, "--bypass-enforcement"}, "verify") == cli::Violations,
             "bypassed verify did not exit with the violations code");
}

void criterion5(Check& c)
{
    auto sub = testkit::subtyping_oracle(1000, 6, 20240611);
    c.expect(sub.ok() && sub.cases >= 1000, "subtyping oracle: " + sub.first_failure);
    auto split = testkit::split_aggregate_roundtrip(500, 31337);
    c.expect(split.ok() && split.cases >= 500, "split/aggregate: " + split.first_failure);
    auto reseq = testkit::resequencer_permutations(4, 8, 300, 4242);
    c.expect(reseq.ok(), "resequencer: " + reseq.first_failure);
    auto sound = testkit::enforcement_soundness(200, 99);
    c.expect(sound.ok() && sound.scripts >= 200,
             "soundness: " + std::to_string(sound.enforced_violations) + " enforced violations, " +
                 std::to_string(sound.bypass_detected) + "/" + std::to_string(sound.with_insertion) + " detected, " +
                 std::to_string(sound.bypass_false_alarms) + " false alarms");
}

std::map<std::string, std::string> snapshot(const fs::path& root)
{
    std::map<std::string, std::string> files;
    for (const auto& e : fs::recursive_directory_iterator(root))
        if (e.is_regular_file())
            files[fs::relative(e.path(), root).string()] = read_file(e.path());
    return files;
}

void criterion6(Check& c, const fs::path& root)
{
    std::vector<std::map<std::string, std::string>> runs;
    for (int round = 0; round < 2; ++round) {
        auto base = root / ("round" + std::to_string(round));
        for (const char* cmd : {"infer", "synthesize", "verify"})
            cli_run(kProject, base / "golden", {"--seed", "7"}, cmd);
        for (const char* cmd : {"infer", "synthesize"})
            cli_run(kProject, base / "malicious", {"--seed", "7"}, cmd);
        cli_run(kProject, base / "malicious", {"--seed", "7", "--scenario", kMalicious}, "verify");
        cli_run(kProject, base / "bypass", {"--seed", "7"}, "infer");
        cli_run(kProject, base / "bypass", {"--seed", "7"}, "synthesize");
        cli_run(kProject, base / "bypass", {"--seed", "7", "--scenario", kMalicious, "--bypass-enforcement"}, "verify");
        runs.push_back(snapshot(base));
    }
    c.expect(runs[0].size() >= 20, "only " + std::to_string(runs[0].size()) + " artifacts produced");
    for (const auto& [name, text] : runs[0]) {
        auto other = runs[1].find(name);
        c.expect(other != runs[1].end() && other->second == text, name + " differs between runs");
    }
    c.expect(runs[0].size() == runs[1].size(), "artifact sets differ between runs");
}

} // namespace

int main()
{
    TempDir tmp("acceptance");
    struct Criterion {
        const char* name;
        double budget_ms;
        std::function<void(Check&)> body;
    };
    const auto golden = tmp.path() / "golden";
    std::vector<Criterion> criteria{
        {"golden mapping reproduction", 1000, [&](Check& c) { criterion1(c, golden); }},
        {"golden adapter chains", 1000, [&](Check& c) { criterion2(c, golden); }},
        {"end-to-end enactment", 1000, [&](Check& c) { criterion3(c, golden); }},
        {"coordination enforcement", 1000, [&](Check& c) { criterion4(c, tmp.path() / "malicious"); }},
        {"property suites", 60000, [&](Check& c) { criterion5(c); }},
        {"determinism", 10000, [&](Check& c) { criterion6(c, tmp.path() / "determinism"); }},
    };
    // Criterion 4 needs its own synthesized artifacts.
    cli_run(kProject, tmp.path() / "malicious", {}, "infer");
    cli_run(kProject, tmp.path() / "malicious", {}, "synthesize");

    bool all = true;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Check check;
        auto start = std::chrono::steady_clock::now();
        try {
            criteria[i].body(check);
        } catch (const std::exception& e) {
            check.expect(false, std::string("exception: ") + e.what());
        }
        double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
        check.expect(ms < criteria[i].budget_ms, "took " + std::to_string(ms) + " ms");
        all &= check.ok();
        std::printf("criterion %zu %s: %s (%.1f ms)%s%s\n", i + 1, criteria[i].name, check.ok() ? "PASS" : "FAIL", ms,
                    check.ok() ? "" : " - ", check.failure.c_str());
    }
    return all ? 0 : 1;
}
