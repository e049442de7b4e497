#include "eipsynth/schema/subtyping.hpp"

#include <algorithm>
#include <cctype>
#include <string>

namespace eipsynth::schema {

namespace {

std::string lower(std::string_view s)
{
    std::string out;
    out.reserve(s.size());
    for (char c : s)
        out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

std::string normalized(std::string_view s)
{
    std::string out;
    for (char c : s)
        if (std::isalnum(static_cast<unsigned char>(c)))
            out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

class Search {
public:
    Search(std::size_t target_count, std::vector<InjectionGroup> groups, std::size_t keep)
        : groups_(std::move(groups)), used_(target_count, false), keep_(keep)
    {
        apply_forced();
        bounds_.resize(groups_.size() + 1);
        for (std::size_t g = groups_.size(); g-- > 0;) {
            int sum = 0;
            for (const auto& row : groups_[g].options)
                sum += row_max(row);
            bounds_[g] = bounds_[g + 1] + sum;
        }
        current_.assignment.resize(groups_.size());
    }

    InjectionResult run()
    {
        group_step(0);
        return std::move(result_);
    }

private:
    static int row_max(const std::vector<std::optional<Score>>& row)
    {
        int best = 0;
        for (const auto& cell : row)
            if (cell)
                best = std::max(best, cell->tenths);
        return best;
    }

    void apply_forced()
    {
        for (std::size_t g = 0; g < groups_.size(); ++g) {
            auto& group = groups_[g];
            if (!group.forced.empty())
                group.optional = false;
            for (auto [source, target] : group.forced) {
                for (std::size_t t = 0; t < group.options[source].size(); ++t)
                    if (t != target)
                        group.options[source][t].reset();
                for (std::size_t h = 0; h < groups_.size(); ++h)
                    for (std::size_t s = 0; s < groups_[h].options.size(); ++s)
                        if ((h != g || s != source) && target < groups_[h].options[s].size())
                            groups_[h].options[s][target].reset();
            }
        }
    }

    int remaining_bound(std::size_t g, std::size_t source) const
    {
        int sum = bounds_[g + 1];
        const auto& rows = groups_[g].options;
        for (std::size_t s = source; s < rows.size(); ++s)
            sum += row_max(rows[s]);
        return sum;
    }

    bool hopeless(int bound) const { return best_ >= 0 && current_.total.tenths + bound < best_; }

    void record()
    {
        if (current_.total.tenths < best_)
            return;
        if (current_.total.tenths > best_) {
            best_ = current_.total.tenths;
            result_.optima.clear();
            result_.optimum_count = 0;
        }
        ++result_.optimum_count;
        if (result_.optima.size() < keep_)
            result_.optima.push_back(current_);
    }

    void group_step(std::size_t g)
    {
        if (g == groups_.size()) {
            record();
            return;
        }
        if (hopeless(bounds_[g]))
            return;
        current_.assignment[g] = std::vector<std::size_t>{};
        source_step(g, 0);
        current_.assignment[g].reset();
        if (groups_[g].optional)
            group_step(g + 1);
    }

    void source_step(std::size_t g, std::size_t source)
    {
        const auto& rows = groups_[g].options;
        if (source == rows.size()) {
            group_step(g + 1);
            return;
        }
        if (hopeless(remaining_bound(g, source)))
            return;
        const auto& row = rows[source];
        for (std::size_t t = 0; t < row.size(); ++t) {
            if (!row[t] || used_[t])
                continue;
            used_[t] = true;
            current_.assignment[g]->push_back(t);
            current_.total += *row[t];
            source_step(g, source + 1);
            current_.total.tenths -= row[t]->tenths;
            current_.assignment[g]->pop_back();
            used_[t] = false;
        }
    }

    std::vector<InjectionGroup> groups_;
    std::vector<int> bounds_;
    std::vector<bool> used_;
    std::size_t keep_;
    int best_ = -1;
    InjectionSolution current_;
    InjectionResult result_;
};

} // namespace

Score name_similarity(std::string_view a, std::string_view b)
{
    if (lower(a) == lower(b))
        return Score{10};
    auto na = normalized(a);
    auto nb = normalized(b);
    if (na == nb)
        return Score{8};
    const auto& shorter = na.size() <= nb.size() ? na : nb;
    const auto& longer = na.size() <= nb.size() ? nb : na;
    if (shorter.size() >= 3 && longer.find(shorter) != std::string::npos)
        return Score{6};
    return Score{2};
}

InjectionResult solve_injection(std::size_t target_count, std::vector<InjectionGroup> groups, std::size_t keep)
{
    return Search(target_count, std::move(groups), keep).run();
}

InjectionGroup candidate_options(const MessageSchema& sub, const MessageSchema& sup, const mapping::HintSet& hints)
{
    const auto& sources = sub.leaves();
    const auto& targets = sup.leaves();
    InjectionGroup group;
    group.options.assign(sources.size(), std::vector<std::optional<Score>>(targets.size()));
    auto relevant = hints.between(sub.qname(), sup.qname());
    for (std::size_t s = 0; s < sources.size(); ++s) {
        for (std::size_t t = 0; t < targets.size(); ++t) {
            if (sources[s].kind != targets[t].kind)
                continue;
            std::optional<mapping::Verdict> verdict;
            if (!relevant.empty())
                verdict = hints.verdict_for({sub.qname(), sources[s].path}, {sup.qname(), targets[t].path});
            if (verdict == mapping::Verdict::Reject)
                continue;
            if (verdict == mapping::Verdict::Confirm) {
                group.options[s][t] = Score{10};
                group.forced.emplace_back(s, t);
                continue;
            }
            group.options[s][t] = name_similarity(sources[s].path.leaf_name(), targets[t].path.leaf_name());
        }
    }
    return group;
}

std::optional<CorrespondenceSet> subtype_of(const MessageSchema& sub, const MessageSchema& sup,
                                            const mapping::HintSet& hints)
{
    InjectionGroup group = candidate_options(sub, sup, hints);
    auto forced = group.forced;
    auto result = solve_injection(sup.leaves().size(), {std::move(group)}, 1);
    if (result.optima.empty())
        return std::nullopt;
    const auto& chosen = *result.optima.front().assignment.front();
    CorrespondenceSet set;
    set.ambiguous = result.optimum_count > 1;
    for (std::size_t s = 0; s < chosen.size(); ++s) {
        auto t = chosen[s];
        bool confirmed = std::find(forced.begin(), forced.end(), std::pair{s, t}) != forced.end();
        Score score = confirmed ? Score{10}
                                : name_similarity(sub.leaves()[s].path.leaf_name(), sup.leaves()[t].path.leaf_name());
        set.pairs.push_back(Correspondence{sub.leaves()[s].path, sup.leaves()[t].path, score, confirmed});
    }
    return set;
}

bool equiv(const MessageSchema& a, const MessageSchema& b)
{
    return subtype_of(a, b).has_value() && subtype_of(b, a).has_value();
}

} // namespace eipsynth::schema
