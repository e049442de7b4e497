#include "support.hpp"

#include <stdexcept>

#include "eipsynth/patterns/message.hpp"

namespace eipsynth::testkit {

TempDir::TempDir(const std::string& tag)
{
    std::random_device rd;
    for (int attempt = 0; attempt < 100; ++attempt) {
        auto candidate = fs::temp_directory_path() / ("eipsynth-" + tag + "-" + std::to_string(rd()));
        if (fs::create_directory(candidate)) {
            path_ = candidate;
            return;
        }
    }
    throw std::runtime_error("cannot create a temp directory");
}

TempDir::~TempDir()
{
    std::error_code ec;
    fs::remove_all(path_, ec);
}

const mapping::MappingReport& Project::report(const std::string& service, const std::string& cd) const
{
    for (const auto& r : reports)
        if (r.service == service && r.counterpart == cd)
            return r;
    throw std::out_of_range("no report " + service + "/" + cd);
}

const synthesis::AdapterSpec& Project::adapter(const std::string& service) const
{
    for (const auto& a : adapters)
        if (a.service == service)
            return a;
    throw std::out_of_range("no adapter for " + service);
}

Project load_project(const fs::path& project_json, bool synthesize)
{
    auto config = cli::load_config(project_json);
    Project p;
    p.choreo = synthesis::load_choreography(config.choreography);
    for (const auto& [role, path] : config.bindings)
        p.bindings.emplace(role, synthesis::load_service(path));
    for (const auto& [a, b] : synthesis::interacting_pairs(p.choreo))
        p.cds.push_back(synthesis::synthesize_cd(p.choreo, a, b));
    p.attachments = synthesis::attachments(p.choreo, p.cds, p.bindings);
    for (const auto& a : p.attachments)
        p.reports.push_back(mapping::infer_mappings(a.service.iface, a.cd_view));
    if (!synthesize)
        return p;
    for (std::size_t i = 0; i < p.attachments.size(); ++i) {
        auto spec = synthesis::select_patterns(p.reports[i], p.attachments[i]);
        if (!spec.is_passthrough())
            p.adapters.push_back(std::move(spec));
    }
    return p;
}

enactment::Harness golden_harness(const Project& p, const fs::path& scenario, bool bypass, std::uint64_t seed)
{
    return enactment::build_harness(p.choreo, p.bindings, p.cds, p.adapters, enactment::load_scenario(scenario),
                                    enactment::HarnessOptions{seed, bypass});
}

namespace {

// A small name pool so that generated schemas collide on names often enough to exercise
// every similarity level.
const std::vector<std::string> kNames{"id", "ID", "item_id", "itemId", "code", "name", "qty", "quantity", "amount", "descr",
                                      "description", "price", "total", "date", "flag"};

schema::TypeNode random_record(std::mt19937_64& rng, std::size_t& budget, int depth)
{
    std::vector<schema::FieldDecl> fields;
    std::vector<std::string> taken;
    std::size_t width = 1 + rng() % 3;
    for (std::size_t i = 0; i < width && budget > 0; ++i) {
        std::string name;
        do
            name = kNames[rng() % kNames.size()];
        while (std::find(taken.begin(), taken.end(), name) != taken.end());
        taken.push_back(name);
        if (depth < 2 && budget >= 2 && rng() % 4 == 0) {
            fields.push_back({name, random_record(rng, budget, depth + 1)});
        } else {
            --budget;
            // Two kinds dominate so that kind-compatible pairs are common.
            static const schema::PrimitiveKind kinds[] = {schema::PrimitiveKind::String, schema::PrimitiveKind::String,
                                                          schema::PrimitiveKind::Int, schema::PrimitiveKind::Int,
                                                          schema::PrimitiveKind::Decimal, schema::PrimitiveKind::Boolean,
                                                          schema::PrimitiveKind::Date};
            fields.push_back({name, schema::TypeNode::primitive(kinds[rng() % 7])});
        }
    }
    return schema::TypeNode::record(std::move(fields));
}

} // namespace

schema::MessageSchema random_schema(std::mt19937_64& rng, const schema::QName& qname, std::size_t max_leaves)
{
    while (true) {
        std::size_t budget = 1 + rng() % max_leaves;
        auto root = random_record(rng, budget, 0);
        if (root.leaf_count() > 0)
            return schema::MessageSchema(qname, std::move(root));
    }
}

Json random_payload(std::mt19937_64& rng, const schema::MessageSchema& schema)
{
    Json payload = Json::object();
    for (const auto& leaf : schema.leaves()) {
        Json value;
        switch (leaf.kind) {
        case schema::PrimitiveKind::String: value = "v" + std::to_string(rng() % 1000); break;
        case schema::PrimitiveKind::Int: value = static_cast<int>(rng() % 2000) - 1000; break;
        case schema::PrimitiveKind::Boolean: value = rng() % 2 == 0; break;
        case schema::PrimitiveKind::Decimal: value = std::to_string(rng() % 500) + "." + std::to_string(10 + rng() % 90); break;
        case schema::PrimitiveKind::Date: value = "2024-0" + std::to_string(1 + rng() % 9) + "-1" + std::to_string(rng() % 10); break;
        }
        patterns::set_leaf(payload, leaf.path, value);
    }
    return payload;
}

} // namespace eipsynth::testkit
