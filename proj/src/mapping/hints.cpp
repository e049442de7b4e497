#include "eipsynth/mapping/hints.hpp"

#include <algorithm>
#include <sstream>

#include "eipsynth/errors.hpp"

namespace eipsynth::mapping {

namespace {

bool same_pair(const Hint& h, const QualifiedPath& a, const QualifiedPath& b)
{
    return (h.source == a && h.target == b) || (h.source == b && h.target == a);
}

std::string trim(std::string_view s)
{
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos)
        return {};
    auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

} // namespace

QualifiedPath QualifiedPath::parse(std::string_view text)
{
    auto hash = text.find('#');
    if (hash == std::string_view::npos)
        throw ParseError("qualified path must be <qname>#<path>: '" + std::string(text) + "'");
    return QualifiedPath{schema::QName::parse(text.substr(0, hash)), schema::FieldPath::parse(text.substr(hash + 1))};
}

HintSet::HintSet(std::vector<Hint> entries) : entries_(std::move(entries))
{
    std::sort(entries_.begin(), entries_.end());
    entries_.erase(std::unique(entries_.begin(), entries_.end()), entries_.end());
    for (std::size_t i = 0; i < entries_.size(); ++i)
        for (std::size_t j = i + 1; j < entries_.size(); ++j)
            if (entries_[i].verdict != entries_[j].verdict &&
                same_pair(entries_[j], entries_[i].source, entries_[i].target))
                throw InvalidHint("pair both confirmed and rejected: " + entries_[i].source.str() + " -> " +
                                  entries_[i].target.str());
}

std::optional<Verdict> HintSet::verdict_for(const QualifiedPath& a, const QualifiedPath& b) const
{
    for (const auto& h : entries_)
        if (same_pair(h, a, b))
            return h.verdict;
    return std::nullopt;
}

std::vector<Hint> HintSet::between(const schema::QName& x, const schema::QName& y) const
{
    std::vector<Hint> out;
    for (const auto& h : entries_)
        if ((h.source.qname == x && h.target.qname == y) || (h.source.qname == y && h.target.qname == x))
            out.push_back(h);
    return out;
}

HintSet parse_hints(std::string_view text)
{
    std::vector<Hint> entries;
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        auto end = text.find('\n', start);
        std::string line = trim(text.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start));
        ++line_no;
        start = end == std::string_view::npos ? text.size() + 1 : end + 1;
        if (line.empty() || line.front() == '#')
            continue;
        std::istringstream in(line);
        std::string verdict, source, arrow, target, extra;
        in >> verdict >> source >> arrow >> target;
        if (!in || arrow != "->" || (in >> extra))
            throw ParseError("hints: expected 'confirm|reject <src> -> <dst>'", line_no, 1);
        Hint h;
        if (verdict == "confirm")
            h.verdict = Verdict::Confirm;
        else if (verdict == "reject")
            h.verdict = Verdict::Reject;
        else
            throw ParseError("hints: unknown verdict '" + verdict + "'", line_no, 1);
        try {
            h.source = QualifiedPath::parse(source);
            h.target = QualifiedPath::parse(target);
        } catch (const ParseError& e) {
            throw ParseError(std::string("hints: ") + e.what(), line_no, 1);
        }
        entries.push_back(std::move(h));
    }
    return HintSet(std::move(entries));
}

std::string to_text(const HintSet& hints)
{
    std::string out;
    for (const auto& h : hints.entries()) {
        out += h.verdict == Verdict::Confirm ? "confirm " : "reject ";
        out += h.source.str() + " -> " + h.target.str() + "\n";
    }
    return out;
}

} // namespace eipsynth::mapping
