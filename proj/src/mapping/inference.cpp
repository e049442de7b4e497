#include "eipsynth/mapping/inference.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "eipsynth/errors.hpp"

namespace eipsynth::mapping {

using schema::Correspondence;
using schema::FieldPath;
using schema::InjectionGroup;
using schema::InjectionResult;
using schema::MessageSchema;
using schema::QName;

namespace {

struct Message {
    const MessageSchema* schema;
    const OperationSpec* op;
    bool is_input;
};

std::vector<Message> messages_of(const InterfaceSpec& iface)
{
    std::vector<Message> out;
    for (const auto& op : iface.operations) {
        out.push_back({&op.input, &op, true});
        if (op.output)
            out.push_back({&*op.output, &op, false});
    }
    return out;
}

bool comparable(const Message& a, const Message& b)
{
    return a.op->direction != b.op->direction && a.is_input == b.is_input;
}

bool identical(const Message& a, const Message& b)
{
    return a.op->name == b.op->name && a.schema->qname().message == b.schema->qname().message &&
           a.schema->same_structure(*b.schema);
}

/// Hints whose two ends lie on opposite sides of the report; others belong to other reports.
void validate_hints(const HintSet& hints, const std::map<QName, MessageSchema>& schemas, const std::string& service)
{
    std::map<QualifiedPath, std::set<QualifiedPath>> partners;
    for (const auto& h : hints.entries()) {
        for (const auto* end : {&h.source, &h.target}) {
            auto it = schemas.find(end->qname);
            if (it != schemas.end() && !it->second.has_leaf(end->path))
                throw InvalidHint("hint names a nonexistent leaf: " + end->str());
        }
        auto a = schemas.find(h.source.qname);
        auto b = schemas.find(h.target.qname);
        if (a == schemas.end() || b == schemas.end())
            continue;
        if ((h.source.qname.service == service) == (h.target.qname.service == service))
            continue;
        if (h.verdict != Verdict::Confirm)
            continue;
        if (a->second.kind_at(h.source.path) != b->second.kind_at(h.target.path))
            throw InvalidHint("confirmed leaves have different kinds: " + h.source.str() + " -> " + h.target.str());
        partners[h.source].insert(h.target);
        partners[h.target].insert(h.source);
    }
    for (const auto& [leaf, others] : partners)
        if (others.size() > 1)
            throw InvalidHint("leaf confirmed onto more than one partner: " + leaf.str());
}

std::vector<Correspondence> to_pairs(const MessageSchema& sub, const MessageSchema& sup, const InjectionGroup& group,
                                     const std::vector<std::size_t>& assignment)
{
    std::vector<Correspondence> pairs;
    for (std::size_t s = 0; s < assignment.size(); ++s) {
        auto t = assignment[s];
        bool confirmed = std::find(group.forced.begin(), group.forced.end(), std::pair{s, t}) != group.forced.end();
        pairs.push_back(Correspondence{sub.leaves()[s].path, sup.leaves()[t].path, *group.options[s][t], confirmed});
    }
    return pairs;
}

/// Mapping for group `g` of a solved contention, or nothing when no optimum includes it.
std::optional<std::pair<DataMapping, std::optional<Ambiguity>>>
mapping_for(const MessageSchema& sub, const MessageSchema& sup, const InjectionGroup& group, std::size_t g,
            const InjectionResult& result)
{
    const auto& optima = result.optima;
    auto including = std::find_if(optima.begin(), optima.end(), [&](const auto& o) { return o.assignment[g]; });
    if (including == optima.end())
        return std::nullopt;
    const auto& chosen = *including->assignment[g];

    DataMapping mapping{sub.qname(), sup.qname(), to_pairs(sub, sup, group, chosen), MappingStatus::Inferred,
                        schema::name_similarity(sub.qname().operation, sup.qname().operation)};

    std::set<std::size_t> differing;
    std::vector<std::vector<std::size_t>> distinct;
    for (const auto& o : optima) {
        const auto& a = o.assignment[g];
        for (std::size_t s = 0; s < chosen.size(); ++s)
            if (!a || (*a)[s] != chosen[s])
                differing.insert(s);
        if (a && std::find(distinct.begin(), distinct.end(), *a) == distinct.end())
            distinct.push_back(*a);
    }
    if (differing.empty())
        return std::pair{std::move(mapping), std::optional<Ambiguity>{}};

    mapping.status = MappingStatus::Ambiguous;
    Ambiguity amb{sub.qname(), sup.qname(), {}, result.optimum_count, {}};
    for (auto s : differing)
        amb.sources.push_back(sub.leaves()[s].path);
    for (const auto& a : distinct)
        amb.alternatives.push_back(to_pairs(sub, sup, group, a));
    return std::pair{std::move(mapping), std::optional<Ambiguity>{std::move(amb)}};
}

using LeafPair = std::pair<FieldPath, FieldPath>;

bool uses(const std::vector<Correspondence>& pairs, const LeafPair& p)
{
    return std::any_of(pairs.begin(), pairs.end(),
                       [&](const Correspondence& c) { return c.source == p.first && c.target == p.second; });
}

} // namespace

MappingReport infer_mappings(const InterfaceSpec& service, const InterfaceSpec& counterpart, const HintSet& hints)
{
    MappingReport report;
    report.service = service.service_name;
    report.counterpart = counterpart.service_name;
    for (const auto* m : service.messages())
        report.schemas.emplace(m->qname(), *m);
    for (const auto* m : counterpart.messages())
        report.schemas.emplace(m->qname(), *m);
    validate_hints(hints, report.schemas, report.service);

    auto ours = messages_of(service);
    auto theirs = messages_of(counterpart);
    std::set<QName> bound;
    for (const auto& a : ours)
        for (const auto& b : theirs)
            if (comparable(a, b) && identical(a, b)) {
                report.identical.push_back(IdenticalPair{a.schema->qname(), b.schema->qname()});
                bound.insert(a.schema->qname());
                bound.insert(b.schema->qname());
            }

    // Candidate subtypes, grouped by supertype message.
    std::map<QName, std::vector<const MessageSchema*>> candidates;
    for (const auto& a : ours) {
        if (bound.count(a.schema->qname()))
            continue;
        for (const auto& b : theirs) {
            if (bound.count(b.schema->qname()) || !comparable(a, b))
                continue;
            if (schema::subtype_of(*a.schema, *b.schema, hints))
                candidates[b.schema->qname()].push_back(a.schema);
            if (schema::subtype_of(*b.schema, *a.schema, hints))
                candidates[a.schema->qname()].push_back(b.schema);
        }
    }

    for (auto& [sup_name, subs] : candidates) {
        const auto& sup = report.schemas.at(sup_name);
        std::sort(subs.begin(), subs.end(), [](const auto* x, const auto* y) { return x->qname() < y->qname(); });
        std::vector<InjectionGroup> groups;
        for (const auto* sub : subs) {
            groups.push_back(schema::candidate_options(*sub, sup, hints));
            groups.back().optional = true;
        }
        auto result = schema::solve_injection(sup.leaves().size(), groups);
        if (result.optima.empty())
            throw InvalidHint("confirmed correspondences into " + sup_name.str() + " cannot hold together");
        for (std::size_t g = 0; g < subs.size(); ++g) {
            auto found = mapping_for(*subs[g], sup, groups[g], g, result);
            if (!found)
                continue;
            report.mappings.push_back(std::move(found->first));
            if (found->second)
                report.ambiguities.push_back(std::move(*found->second));
        }
    }
    report.normalize();
    return apply_hints(std::move(report), hints);
}

MappingReport apply_hints(MappingReport report, const HintSet& hints)
{
    validate_hints(hints, report.schemas, report.service);

    for (auto& m : report.mappings) {
        if (m.status == MappingStatus::Rejected)
            continue;
        auto relevant = hints.between(m.sub, m.sup);
        if (relevant.empty())
            continue;

        std::vector<LeafPair> confirms, rejects;
        for (const auto& h : relevant) {
            LeafPair p = h.source.qname == m.sub ? LeafPair{h.source.path, h.target.path}
                                                 : LeafPair{h.target.path, h.source.path};
            (h.verdict == Verdict::Confirm ? confirms : rejects).push_back(std::move(p));
        }
        auto admissible = [&](const std::vector<Correspondence>& pairs) {
            return std::none_of(rejects.begin(), rejects.end(), [&](const auto& p) { return uses(pairs, p); }) &&
                   std::all_of(confirms.begin(), confirms.end(), [&](const auto& p) { return uses(pairs, p); });
        };

        auto amb = std::find_if(report.ambiguities.begin(), report.ambiguities.end(),
                                [&](const Ambiguity& a) { return a.sub == m.sub && a.sup == m.sup; });
        if (amb != report.ambiguities.end()) {
            auto& alts = amb->alternatives;
            alts.erase(std::remove_if(alts.begin(), alts.end(), [&](const auto& a) { return !admissible(a); }),
                       alts.end());
        }
        bool has_alternative = amb != report.ambiguities.end() && !amb->alternatives.empty();

        bool rejected = std::any_of(rejects.begin(), rejects.end(), [&](const auto& p) {
            return uses(m.correspondences, p);
        });
        if (rejected) {
            if (has_alternative) {
                m.correspondences = amb->alternatives.front();
            } else {
                auto& pairs = m.correspondences;
                pairs.erase(std::remove_if(pairs.begin(), pairs.end(),
                                           [&](const Correspondence& c) {
                                               return std::find(rejects.begin(), rejects.end(),
                                                                LeafPair{c.source, c.target}) != rejects.end();
                                           }),
                            pairs.end());
                m.status = MappingStatus::Rejected;
                if (amb != report.ambiguities.end())
                    report.ambiguities.erase(amb);
                continue;
            }
        }

        if (!admissible(m.correspondences)) {
            if (has_alternative) {
                m.correspondences = amb->alternatives.front();
            } else {
                // The confirmed pair is not part of the current assignment: solve again around it,
                // keeping pairs confirmed earlier.
                auto effective = relevant;
                for (const auto& c : m.correspondences)
                    if (c.confirmed)
                        effective.push_back(Hint{{m.sub, c.source}, {m.sup, c.target}, Verdict::Confirm});
                const auto& sub = report.schema_of(m.sub);
                const auto& sup = report.schema_of(m.sup);
                auto group = schema::candidate_options(sub, sup, HintSet(std::move(effective)));
                auto result = schema::solve_injection(sup.leaves().size(), {group});
                if (result.optima.empty())
                    throw InvalidHint("confirmed correspondences cannot all hold for " + m.sub.str() + " in " +
                                      m.sup.str());
                auto found = mapping_for(sub, sup, group, 0, result);
                m.correspondences = found->first.correspondences;
                if (found->second) {
                    if (amb != report.ambiguities.end())
                        *amb = std::move(*found->second);
                    else
                        report.ambiguities.push_back(std::move(*found->second));
                    m.status = MappingStatus::Ambiguous;
                    continue;
                }
            }
        }

        for (auto& c : m.correspondences)
            if (std::find(confirms.begin(), confirms.end(), LeafPair{c.source, c.target}) != confirms.end()) {
                c.confirmed = true;
                c.score = schema::Score{10};
            }

        amb = std::find_if(report.ambiguities.begin(), report.ambiguities.end(),
                           [&](const Ambiguity& a) { return a.sub == m.sub && a.sup == m.sup; });
        bool still_ambiguous = amb != report.ambiguities.end() && amb->alternatives.size() > 1;
        if (amb != report.ambiguities.end() && !still_ambiguous)
            report.ambiguities.erase(amb);
        bool any_confirmed = std::any_of(m.correspondences.begin(), m.correspondences.end(),
                                         [](const Correspondence& c) { return c.confirmed; });
        m.status = still_ambiguous ? MappingStatus::Ambiguous
                   : any_confirmed ? MappingStatus::Confirmed
                                   : MappingStatus::Inferred;
    }
    report.normalize();
    return report;
}

} // namespace eipsynth::mapping
