#include "eipsynth/mapping/report.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "eipsynth/errors.hpp"
#include "eipsynth/schema/formats.hpp"

namespace eipsynth::mapping {

using schema::Correspondence;
using schema::FieldPath;
using schema::QName;
using schema::Score;

namespace {

MappingStatus status_from_string(const std::string& s)
{
    if (s == "inferred") return MappingStatus::Inferred;
    if (s == "confirmed") return MappingStatus::Confirmed;
    if (s == "rejected") return MappingStatus::Rejected;
    if (s == "ambiguous") return MappingStatus::Ambiguous;
    throw ParseError("report: unknown mapping status '" + s + "'");
}

Score score_from_json(const Json& v)
{
    return Score{static_cast<int>(std::lround(v.get<double>() * 10.0))};
}

Json correspondence_to_json(const Correspondence& c)
{
    return Json{{"source", c.source.str()},
                {"target", c.target.str()},
                {"score", c.score.value()},
                {"confirmed", c.confirmed}};
}

Correspondence correspondence_from_json(const Json& v)
{
    return Correspondence{FieldPath::parse(v.at("source").get<std::string>()),
                          FieldPath::parse(v.at("target").get<std::string>()), score_from_json(v.at("score")),
                          v.value("confirmed", false)};
}

} // namespace

std::string_view to_string(MappingStatus status) noexcept
{
    switch (status) {
    case MappingStatus::Inferred: return "inferred";
    case MappingStatus::Confirmed: return "confirmed";
    case MappingStatus::Rejected: return "rejected";
    case MappingStatus::Ambiguous: return "ambiguous";
    }
    return "?";
}

const DataMapping* MappingReport::find(const QName& sub, const QName& sup) const
{
    for (const auto& m : mappings)
        if (m.sub == sub && m.sup == sup)
            return &m;
    return nullptr;
}

const schema::MessageSchema& MappingReport::schema_of(const QName& qname) const
{
    auto it = schemas.find(qname);
    if (it == schemas.end())
        throw Error("report " + service + "/" + counterpart + " has no schema for " + qname.str());
    return it->second;
}

bool MappingReport::is_identical(const QName& qname) const
{
    return std::any_of(identical.begin(), identical.end(), [&](const IdenticalPair& p) {
        return p.service_message == qname || p.counterpart_message == qname;
    });
}

void MappingReport::normalize()
{
    std::sort(mappings.begin(), mappings.end(), [](const DataMapping& a, const DataMapping& b) {
        return std::tie(a.sub, a.sup) < std::tie(b.sub, b.sup);
    });
    std::sort(identical.begin(), identical.end());
    std::sort(ambiguities.begin(), ambiguities.end(), [](const Ambiguity& a, const Ambiguity& b) {
        return std::tie(a.sub, a.sup) < std::tie(b.sub, b.sup);
    });

    std::set<QName> covered;
    for (const auto& m : mappings) {
        if (m.status == MappingStatus::Rejected)
            continue;
        covered.insert(m.sub);
        covered.insert(m.sup);
    }
    unmapped.clear();
    for (const auto& [qname, schema] : schemas)
        if (!covered.count(qname) && !is_identical(qname))
            unmapped.push_back(qname);
}

Json to_json(const MappingReport& report)
{
    Json mappings = Json::array();
    for (const auto& m : report.mappings) {
        Json pairs = Json::array();
        for (const auto& c : m.correspondences)
            pairs.push_back(correspondence_to_json(c));
        mappings.push_back(Json{{"sub", m.sub.str()},
                                {"sup", m.sup.str()},
                                {"status", std::string(to_string(m.status))},
                                {"operationSimilarity", m.operation_similarity.value()},
                                {"correspondences", pairs}});
    }
    Json unmapped = Json::array();
    for (const auto& q : report.unmapped)
        unmapped.push_back(q.str());
    Json identical = Json::array();
    for (const auto& p : report.identical)
        identical.push_back(Json{{"service", p.service_message.str()}, {"counterpart", p.counterpart_message.str()}});
    Json ambiguities = Json::array();
    for (const auto& a : report.ambiguities) {
        Json sources = Json::array();
        for (const auto& s : a.sources)
            sources.push_back(s.str());
        Json alternatives = Json::array();
        for (const auto& alt : a.alternatives) {
            Json pairs = Json::array();
            for (const auto& c : alt)
                pairs.push_back(correspondence_to_json(c));
            alternatives.push_back(pairs);
        }
        ambiguities.push_back(Json{{"sub", a.sub.str()},
                                   {"sup", a.sup.str()},
                                   {"sources", sources},
                                   {"optimalCount", a.optimal_count},
                                   {"alternatives", alternatives}});
    }
    Json schemas = Json::array();
    for (const auto& [qname, schema] : report.schemas)
        schemas.push_back(schema::to_compact(schema));
    return Json{{"service", report.service},     {"counterpart", report.counterpart}, {"mappings", mappings},
                {"unmapped", unmapped},           {"identical", identical},           {"ambiguities", ambiguities},
                {"schemas", schemas}};
}

MappingReport report_from_json(const Json& value)
{
    try {
        MappingReport r;
        r.service = value.at("service").get<std::string>();
        r.counterpart = value.at("counterpart").get<std::string>();
        for (const auto& s : value.at("schemas")) {
            auto schema = schema::from_compact(s);
            r.schemas.emplace(schema.qname(), schema);
        }
        for (const auto& m : value.at("mappings")) {
            DataMapping d{QName::parse(m.at("sub").get<std::string>()), QName::parse(m.at("sup").get<std::string>()),
                          {}, status_from_string(m.at("status").get<std::string>()),
                          score_from_json(m.at("operationSimilarity"))};
            for (const auto& c : m.at("correspondences"))
                d.correspondences.push_back(correspondence_from_json(c));
            r.mappings.push_back(std::move(d));
        }
        for (const auto& q : value.at("unmapped"))
            r.unmapped.push_back(QName::parse(q.get<std::string>()));
        for (const auto& p : value.at("identical"))
            r.identical.push_back(IdenticalPair{QName::parse(p.at("service").get<std::string>()),
                                                QName::parse(p.at("counterpart").get<std::string>())});
        for (const auto& a : value.at("ambiguities")) {
            Ambiguity amb{QName::parse(a.at("sub").get<std::string>()), QName::parse(a.at("sup").get<std::string>()),
                          {}, a.at("optimalCount").get<std::size_t>(), {}};
            for (const auto& s : a.at("sources"))
                amb.sources.push_back(FieldPath::parse(s.get<std::string>()));
            for (const auto& alt : a.at("alternatives")) {
                std::vector<Correspondence> pairs;
                for (const auto& c : alt)
                    pairs.push_back(correspondence_from_json(c));
                amb.alternatives.push_back(std::move(pairs));
            }
            r.ambiguities.push_back(std::move(amb));
        }
        return r;
    } catch (const Json::exception& e) {
        throw ParseError(std::string("mapping report: ") + e.what());
    }
}

} // namespace eipsynth::mapping
