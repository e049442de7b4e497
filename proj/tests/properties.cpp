#include "properties.hpp"

#include <algorithm>
#include <numeric>
#include <random>

#include "eipsynth/enactment/conformance.hpp"
#include "eipsynth/patterns/eip.hpp"
#include "eipsynth/schema/subtyping.hpp"
#include "support.hpp"

namespace eipsynth::testkit {

using schema::FieldPath;
using schema::MessageSchema;
using schema::QName;

namespace {

struct Brute {
    int best = -1;
    std::size_t count = 0;
};

void enumerate(const MessageSchema& sub, const MessageSchema& sup, std::size_t s, std::vector<bool>& used, int total,
               Brute& out)
{
    const auto& a = sub.leaves();
    const auto& b = sup.leaves();
    if (s == a.size()) {
        if (total > out.best) {
            out.best = total;
            out.count = 0;
        }
        if (total == out.best)
            ++out.count;
        return;
    }
    for (std::size_t t = 0; t < b.size(); ++t) {
        if (used[t] || a[s].kind != b[t].kind)
            continue;
        used[t] = true;
        enumerate(sub, sup, s + 1, used, total + schema::name_similarity(a[s].path.leaf_name(), b[t].path.leaf_name()).tenths,
                  out);
        used[t] = false;
    }
}

} // namespace

PropertyResult subtyping_oracle(std::size_t cases, std::size_t max_leaves, std::uint64_t seed)
{
    PropertyResult r;
    std::mt19937_64 rng(seed);
    for (std::size_t i = 0; i < cases; ++i) {
        ++r.cases;
        auto sub = random_schema(rng, QName{"A", "op", "m"}, max_leaves);
        // Every third case checks a schema against itself; the rest are independent draws.
        auto sup = i % 3 == 0 ? MessageSchema(QName{"B", "op", "m"}, sub.root())
                              : random_schema(rng, QName{"B", "op", "m"}, max_leaves);
        Brute oracle;
        std::vector<bool> used(sup.leaves().size());
        enumerate(sub, sup, 0, used, 0, oracle);

        auto got = schema::subtype_of(sub, sup);
        const auto where = "case " + std::to_string(i) + ": ";
        if (got.has_value() != (oracle.count > 0)) {
            r.fail(where + "existence differs");
            continue;
        }
        if (!got)
            continue;
        if (got->total().tenths != oracle.best)
            r.fail(where + "total " + std::to_string(got->total().tenths) + " vs " + std::to_string(oracle.best));
        else if (got->ambiguous != (oracle.count > 1))
            r.fail(where + "ambiguity flag differs");
        std::set<FieldPath> targets;
        for (const auto& p : got->pairs) {
            if (sub.kind_at(p.source) != sup.kind_at(p.target) || !targets.insert(p.target).second) {
                r.fail(where + "pairs are not a kind-preserving injection");
                break;
            }
        }
        if (got->pairs.size() != sub.leaves().size())
            r.fail(where + "not every source leaf is mapped");
    }
    return r;
}

PropertyResult split_aggregate_roundtrip(std::size_t cases, std::uint64_t seed)
{
    PropertyResult r;
    std::mt19937_64 rng(seed);
    for (std::size_t i = 0; i < cases; ++i) {
        ++r.cases;
        const QName source{"Src", "op", "msg"};
        auto schema = random_schema(rng, source, 6);
        const auto& leaves = schema.leaves();

        std::size_t k = 1 + rng() % std::min<std::size_t>(3, leaves.size());
        std::vector<std::size_t> owner(leaves.size());
        std::iota(owner.begin(), owner.begin() + static_cast<long>(k), 0); // every part gets a leaf
        for (std::size_t l = k; l < leaves.size(); ++l)
            owner[l] = rng() % k;
        std::shuffle(owner.begin(), owner.end(), rng);

        patterns::Splitter split{source, {}};
        patterns::Aggregator merge;
        merge.target = QName{"Merged", "op", "msg"};
        for (std::size_t j = 0; j < k; ++j) {
            QName part{"Part", "p" + std::to_string(j), "msg"};
            patterns::PathMap out, back;
            for (std::size_t l = 0; l < leaves.size(); ++l)
                if (owner[l] == j) {
                    auto field = FieldPath{{"f" + std::to_string(l)}};
                    out.emplace_back(leaves[l].path, field);
                    back.emplace_back(field, leaves[l].path);
                }
            split.parts.push_back({part, out});
            merge.expected.push_back(part);
            merge.merge_map.emplace(part, back);
        }

        patterns::RuntimeMessage msg{source, random_payload(rng, schema), {"token", std::nullopt, "test", 1}};
        auto parts = patterns::splitter_process(split, msg);
        if (parts.size() != k) {
            r.fail("case " + std::to_string(i) + ": splitter produced " + std::to_string(parts.size()) + " parts");
            continue;
        }
        std::shuffle(parts.begin(), parts.end(), rng);
        patterns::PatternState state;
        std::optional<patterns::RuntimeMessage> merged;
        for (std::size_t j = 0; j < parts.size(); ++j) {
            auto out = patterns::aggregator_process(merge, state, parts[j]);
            if (out.has_value() != (j + 1 == parts.size()))
                r.fail("case " + std::to_string(i) + ": aggregator released at the wrong time");
            if (out)
                merged = std::move(out);
        }
        if (!merged || merged->payload != msg.payload)
            r.fail("case " + std::to_string(i) + ": round trip changed the payload");
        else if (state.buffered() != 0)
            r.fail("case " + std::to_string(i) + ": aggregator kept messages after release");
    }
    return r;
}

namespace {

/// Feeds `arrival` (indices into order) and checks strict prefix release after every message.
bool resequence_once(const patterns::Resequencer& cfg, patterns::PatternState& state,
                     const std::vector<std::size_t>& arrival, std::string& why)
{
    std::vector<bool> seen(arrival.size());
    std::size_t released = 0;
    for (auto idx : arrival) {
        seen[idx] = true;
        patterns::RuntimeMessage m{cfg.order[idx], Json{{"i", idx}}, {"t", std::nullopt, "test", 0}};
        auto out = patterns::resequencer_process(cfg, state, m);
        std::size_t prefix = released;
        while (prefix < seen.size() && seen[prefix])
            ++prefix;
        if (out.size() != prefix - released) {
            why = "released " + std::to_string(out.size()) + " instead of " + std::to_string(prefix - released);
            return false;
        }
        for (const auto& o : out)
            if (o.qname != cfg.order[released++]) {
                why = "released out of order";
                return false;
            }
    }
    if (released != arrival.size() || state.buffered() != 0) {
        why = "round did not complete";
        return false;
    }
    return true;
}

patterns::Resequencer sequence_of(std::size_t n)
{
    patterns::Resequencer cfg;
    for (std::size_t i = 0; i < n; ++i)
        cfg.order.push_back(QName{"Svc", "op" + std::to_string(i), "msg"});
    return cfg;
}

} // namespace

PropertyResult resequencer_permutations(std::size_t exhaustive_max, std::size_t random_max,
                                        std::size_t random_cases, std::uint64_t seed)
{
    PropertyResult r;
    std::string why;
    for (std::size_t n = 1; n <= exhaustive_max; ++n) {
        auto cfg = sequence_of(n);
        std::vector<std::size_t> perm(n);
        std::iota(perm.begin(), perm.end(), 0);
        do {
            ++r.cases;
            // Two rounds on one state: the second checks that a finished round resets.
            patterns::PatternState state;
            if (!resequence_once(cfg, state, perm, why) || !resequence_once(cfg, state, perm, why))
                r.fail("n=" + std::to_string(n) + ": " + why);
        } while (std::next_permutation(perm.begin(), perm.end()));
    }
    std::mt19937_64 rng(seed);
    for (std::size_t c = 0; c < random_cases; ++c) {
        ++r.cases;
        std::size_t n = exhaustive_max + 1 + rng() % (random_max - exhaustive_max);
        auto cfg = sequence_of(n);
        std::vector<std::size_t> perm(n);
        std::iota(perm.begin(), perm.end(), 0);
        std::shuffle(perm.begin(), perm.end(), rng);
        patterns::PatternState state;
        if (!resequence_once(cfg, state, perm, why))
            r.fail("n=" + std::to_string(n) + ": " + why);
    }
    return r;
}

namespace {

using enactment::ScriptAction;

std::vector<ScriptAction> add_unit(std::mt19937_64& rng, int n)
{
    auto id = "p" + std::to_string(n);
    return {{"addProduct", Json{{"product", {{"id", id}, {"description", "item " + id}}}}},
            {"setQuantity", Json{{"quantity", 1 + static_cast<int>(rng() % 9)}}}};
}

std::vector<ScriptAction> remove_unit(int n)
{
    return {{"removeProduct", Json{{"productId", "p" + std::to_string(n)}}}};
}

std::vector<ScriptAction> checkout_unit()
{
    return {{"checkout", Json{{"cartId", "cart"}}}};
}

} // namespace

SoundnessResult enforcement_soundness(std::size_t scripts, std::uint64_t seed)
{
    SoundnessResult r;
    static const auto project = load_project(fixture("instore/project.json"));
    std::mt19937_64 rng(seed);

    for (std::size_t i = 0; i < scripts; ++i) {
        std::vector<std::vector<ScriptAction>> units;
        int n = 0;
        units.push_back(add_unit(rng, n++));
        for (std::size_t extra = rng() % 5; extra > 0; --extra)
            units.push_back(rng() % 2 == 0 ? add_unit(rng, n++) : remove_unit(static_cast<int>(rng() % n)));
        units.push_back(checkout_unit());

        bool insertion = rng() % 2 == 0;
        if (insertion) {
            switch (rng() % 4) {
            case 0: units.insert(units.begin(), remove_unit(0)); break;
            case 1: units.insert(units.begin(), checkout_unit()); break;
            case 2: units.push_back(add_unit(rng, n++)); break;
            default: units.push_back(rng() % 2 == 0 ? remove_unit(0) : checkout_unit()); break;
            }
        }

        enactment::Scenario scenario;
        auto& client = scenario.stubs["Client"];
        for (const auto& u : units)
            client.script.insert(client.script.end(), u.begin(), u.end());
        scenario.stubs["SmartCart"].reactions.push_back({"checkout", {{"pay", Json{{"total", "9.99"}}}}});

        ++r.scripts;
        r.with_insertion += insertion ? 1 : 0;
        for (bool bypass : {false, true}) {
            auto harness = enactment::build_harness(project.choreo, project.bindings, project.cds, project.adapters,
                                                    scenario, enactment::HarnessOptions{seed + i, bypass});
            auto trace = enactment::enact(harness);
            auto report = enactment::check_conformance(project.choreo, trace);
            if (!bypass)
                r.enforced_violations += report.violations.size();
            else if (insertion && !report.conformant())
                ++r.bypass_detected;
            else if (!insertion && !report.conformant())
                ++r.bypass_false_alarms;
        }
    }
    return r;
}

} // namespace eipsynth::testkit
