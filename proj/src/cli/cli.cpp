#include "eipsynth/cli/cli.hpp"

#include <CLI11.hpp>

#include <functional>
#include <iostream>

#include "eipsynth/enactment/conformance.hpp"
#include "eipsynth/enactment/harness.hpp"
#include "eipsynth/errors.hpp"
#include "eipsynth/json_util.hpp"
#include "eipsynth/mapping/hints.hpp"
#include "eipsynth/mapping/inference.hpp"
#include "eipsynth/synthesis/adapter.hpp"
#include "eipsynth/synthesis/cd.hpp"

namespace eipsynth::cli {

using mapping::MappingReport;
using synthesis::AdapterSpec;
using synthesis::CDSpec;

namespace {

fs::path existing(const fs::path& base, const std::string& rel, const std::string& what)
{
    auto p = (base / rel).lexically_normal();
    if (!fs::exists(p))
        throw Error(what + " not found: " + p.string());
    return p;
}

/// Maps the error hierarchy onto the exit-code contract.
int guarded(std::ostream& err, const std::function<int()>& body)
{
    try {
        return body();
    } catch (const UnsatisfiableAdaptation& e) {
        err << "error: " << e.what() << "\n";
        return Unsatisfiable;
    } catch (const AmbiguityError& e) {
        err << "error: " << e.what() << "\n";
        return Ambiguous;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return Failure;
    }
}

struct Workspace {
    synthesis::ChoreographySpec choreo;
    std::map<std::string, synthesis::ServiceDescription> bindings;
    mapping::HintSet hints;
    std::vector<CDSpec> cds;
    std::vector<synthesis::Attachment> attachments;
};

Workspace load_workspace(const ProjectConfig& config)
{
    Workspace w;
    w.choreo = synthesis::load_choreography(config.choreography);
    for (const auto& [role, path] : config.bindings)
        w.bindings.emplace(role, synthesis::load_service(path));
    if (config.hints && fs::exists(*config.hints))
        w.hints = mapping::parse_hints(read_file(*config.hints));
    for (const auto& [a, b] : synthesis::interacting_pairs(w.choreo))
        w.cds.push_back(synthesis::synthesize_cd(w.choreo, a, b));
    w.attachments = synthesis::attachments(w.choreo, w.cds, w.bindings);
    return w;
}

std::vector<MappingReport> infer_all(const Workspace& w, const mapping::HintSet& hints)
{
    std::vector<MappingReport> reports;
    for (const auto& a : w.attachments)
        reports.push_back(mapping::infer_mappings(a.service.iface, a.cd_view, hints));
    return reports;
}

void write_reports(const ProjectConfig& config, const std::vector<MappingReport>& reports)
{
    Json list = Json::array();
    for (const auto& r : reports)
        list.push_back(mapping::to_json(r));
    write_file(config.out / "mappings.json", canonical_dump(Json{{"reports", list}}));
}

std::string pairs_text(const std::vector<schema::Correspondence>& pairs)
{
    std::string s;
    for (const auto& c : pairs)
        s += (s.empty() ? "" : ", ") + c.source.str() + " -> " + c.target.str();
    return s;
}

/// Prints the mapping summary; returns the number of open ambiguities.
std::size_t summarize(const std::vector<MappingReport>& reports, std::ostream& out)
{
    std::size_t open = 0;
    for (const auto& r : reports) {
        out << r.service << " / " << r.counterpart << ": " << r.mappings.size() << " mapping(s), "
            << r.identical.size() << " identical, " << r.unmapped.size() << " unmapped\n";
        for (const auto& m : r.mappings) {
            out << "  " << m.sub.str() << " <= " << m.sup.str() << " [" << mapping::to_string(m.status) << "]\n";
            for (const auto& c : m.correspondences)
                out << "    " << c.source.str() << " -> " << c.target.str() << "\n";
        }
        for (const auto& q : r.unmapped)
            out << "  unmapped " << q.str() << "\n";
        for (const auto& a : r.ambiguities) {
            ++open;
            out << "  ambiguous " << a.sub.str() << " <= " << a.sup.str() << ": " << a.optimal_count
                << " optimal assignments\n";
            for (std::size_t i = 0; i < a.alternatives.size(); ++i)
                out << "    [" << i + 1 << "] " << pairs_text(a.alternatives[i]) << "\n";
        }
    }
    return open;
}

std::vector<MappingReport> read_reports(const ProjectConfig& config)
{
    auto path = config.out / "mappings.json";
    if (!fs::exists(path))
        throw Error("no mapping report at " + path.string() + "; run infer first");
    auto doc = Json::parse(read_file(path));
    std::vector<MappingReport> out;
    for (const auto& r : doc.at("reports"))
        out.push_back(mapping::report_from_json(r));
    return out;
}

/// Removes artifacts a previous run left, so reruns produce exactly the current set.
void reset_dir(const fs::path& dir)
{
    if (fs::exists(dir))
        for (const auto& entry : fs::directory_iterator(dir))
            if (entry.is_regular_file())
                fs::remove(entry.path());
    fs::create_directories(dir);
}

std::vector<fs::path> json_files(const fs::path& dir)
{
    std::vector<fs::path> out;
    if (!fs::exists(dir))
        return out;
    for (const auto& entry : fs::directory_iterator(dir))
        if (entry.is_regular_file() && entry.path().extension() == ".json")
            out.push_back(entry.path());
    std::sort(out.begin(), out.end());
    return out;
}

enactment::Trace run_enactment(const ProjectConfig& config, const Workspace& w, bool bypass, std::ostream& out)
{
    if (!config.scenario)
        throw Error("no scenario configured");
    auto cd_files = json_files(config.out / "cds");
    if (cd_files.empty())
        throw Error("no coordination delegates under " + (config.out / "cds").string() + "; run synthesize first");
    std::vector<CDSpec> cds;
    for (const auto& f : cd_files)
        cds.push_back(synthesis::cd_from_json(Json::parse(read_file(f))));
    std::vector<AdapterSpec> adapters;
    for (const auto& f : json_files(config.out / "adapters"))
        adapters.push_back(synthesis::adapter_from_json(Json::parse(read_file(f))));

    auto harness = enactment::build_harness(w.choreo, w.bindings, cds, adapters,
                                            enactment::load_scenario(*config.scenario),
                                            enactment::HarnessOptions{config.seed, bypass});
    auto trace = enactment::enact(harness);
    write_file(config.out / "trace.jsonl", enactment::to_jsonl(trace));
    out << "enacted with " << harness.adapter_count() << " adapter(s): " << trace.events.size() << " event(s), "
        << trace.of_kind(enactment::EventKind::Blocked).size() << " blocked"
        << (trace.complete ? "" : ", stopped at maxTicks") << "\n";
    return trace;
}

} // namespace

ProjectConfig load_config(const fs::path& path)
{
    if (!fs::exists(path))
        throw Error("config not found: " + path.string());
    auto doc = parse_json_strict(read_file(path), path.string());
    const auto base = path.parent_path();
    const std::string ctx = path.string();

    ProjectConfig c;
    c.choreography = existing(base, require_string(doc, "choreography", ctx), "choreography");
    const auto& bindings = require_member(doc, "bindings", ctx);
    if (!bindings.is_object())
        throw ParseError(ctx + ": 'bindings' must map roles to interface files");
    for (const auto& [role, file] : bindings.items()) {
        if (!file.is_string())
            throw ParseError(ctx + ": binding for " + role + " must be a path");
        c.bindings.emplace(role, existing(base, file.get<std::string>(), "interface for " + role));
    }
    if (doc.contains("hints"))
        c.hints = (base / require_string(doc, "hints", ctx)).lexically_normal();
    if (doc.contains("scenario"))
        c.scenario = existing(base, require_string(doc, "scenario", ctx), "scenario");
    c.out = (base / (doc.contains("out") ? require_string(doc, "out", ctx) : std::string("out"))).lexically_normal();
    if (doc.contains("seed")) {
        if (!doc.at("seed").is_number_unsigned())
            throw ParseError(ctx + ": 'seed' must be a non-negative integer");
        c.seed = doc.at("seed").get<std::uint64_t>();
    }
    if (doc.contains("verbosity"))
        c.verbosity = doc.at("verbosity").get<int>();
    return c;
}

ProjectConfig apply(ProjectConfig config, const Overrides& overrides)
{
    if (overrides.seed)
        config.seed = *overrides.seed;
    if (overrides.out)
        config.out = *overrides.out;
    if (overrides.scenario) {
        if (!fs::exists(*overrides.scenario))
            throw Error("scenario not found: " + overrides.scenario->string());
        config.scenario = *overrides.scenario;
    }
    return config;
}

int cmd_infer(const ProjectConfig& config, std::ostream& out, std::ostream& err)
{
    return guarded(err, [&] {
        auto w = load_workspace(config);
        auto reports = infer_all(w, w.hints);
        write_reports(config, reports);
        if (summarize(reports, out) > 0) {
            err << "ambiguous mappings remain; resolve them with confirm or a hints file\n";
            return int(Ambiguous);
        }
        return int(Ok);
    });
}

int cmd_confirm(const ProjectConfig& config, std::istream& in, std::ostream& out, std::ostream& err)
{
    return guarded(err, [&] {
        auto w = load_workspace(config);
        // One question at a time: an answer can settle other ambiguities too.
        auto entries = w.hints.entries();
        while (true) {
            const mapping::Ambiguity* open = nullptr;
            auto reports = infer_all(w, mapping::HintSet(entries));
            for (const auto& r : reports)
                if (!open && !r.ambiguities.empty())
                    open = &r.ambiguities.front();
            if (!open)
                break;
            const auto& a = *open;
            out << a.sub.str() << " <= " << a.sup.str() << "\n";
            for (std::size_t i = 0; i < a.alternatives.size(); ++i)
                out << "  [" << i + 1 << "] " << pairs_text(a.alternatives[i]) << "\n";
            std::optional<std::size_t> choice;
            std::string line;
            while (!choice) {
                out << "choose 1-" << a.alternatives.size() << ": " << std::flush;
                if (!std::getline(in, line))
                    break;
                try {
                    auto n = std::stoul(line);
                    if (n >= 1 && n <= a.alternatives.size())
                        choice = n - 1;
                } catch (const std::exception&) {
                }
            }
            if (!choice)
                break;
            for (const auto& c : a.alternatives[*choice])
                if (std::find(a.sources.begin(), a.sources.end(), c.source) != a.sources.end())
                    entries.push_back(mapping::Hint{{a.sub, c.source}, {a.sup, c.target}, mapping::Verdict::Confirm});
        }
        mapping::HintSet hints(entries);
        auto hints_path = config.hints.value_or(config.out / "hints.txt");
        write_file(hints_path, mapping::to_text(hints));
        out << "hints written to " << hints_path.string() << "\n";
        auto reports = infer_all(w, hints);
        write_reports(config, reports);
        if (summarize(reports, out) > 0)
            return int(Ambiguous);
        return int(Ok);
    });
}

int cmd_synthesize(const ProjectConfig& config, std::ostream& out, std::ostream& err)
{
    return guarded(err, [&] {
        auto w = load_workspace(config);
        auto reports = read_reports(config);

        std::vector<AdapterSpec> adapters;
        for (const auto& a : w.attachments) {
            auto r = std::find_if(reports.begin(), reports.end(), [&](const MappingReport& m) {
                return m.service == a.service.iface.service_name && m.counterpart == a.cd;
            });
            if (r == reports.end())
                throw Error("no mapping report for " + a.service.iface.service_name + " / " + a.cd +
                            "; run infer again");
            auto spec = synthesis::select_patterns(*r, a);
            if (spec.is_passthrough())
                out << a.service.iface.service_name << " / " << a.cd << ": no adapter needed\n";
            else
                adapters.push_back(std::move(spec));
        }

        reset_dir(config.out / "cds");
        reset_dir(config.out / "adapters");
        std::string summary;
        for (const auto& cd : w.cds) {
            write_file(config.out / "cds" / (cd.id + ".json"), canonical_dump(synthesis::to_json(cd)));
            summary += "CD " + cd.id + " (" + cd.roles.first + ", " + cd.roles.second + "): " +
                       std::to_string(cd.enforcement.states.size()) + " states, " +
                       std::to_string(cd.routes.size()) + " operations\n";
        }
        for (const auto& spec : adapters) {
            auto emitted = synthesis::emit_adapter(spec);
            write_file(config.out / "adapters" / (spec.id + ".json"), emitted.artifact);
            write_file(config.out / "adapters" / (spec.id + ".report.txt"), emitted.report);
            summary += spec.id + ":\n" + emitted.report;
        }
        write_file(config.out / "synthesis.txt", summary);
        out << summary;
        return int(Ok);
    });
}

int cmd_enact(const ProjectConfig& config, bool bypass_enforcement, std::ostream& out, std::ostream& err)
{
    return guarded(err, [&] {
        run_enactment(config, load_workspace(config), bypass_enforcement, out);
        return int(Ok);
    });
}

int cmd_verify(const ProjectConfig& config, bool bypass_enforcement, std::ostream& out, std::ostream& err)
{
    return guarded(err, [&] {
        auto w = load_workspace(config);
        auto trace = run_enactment(config, w, bypass_enforcement, out);
        auto report = enactment::check_conformance(w.choreo, trace);
        write_file(config.out / "conformance.json", canonical_dump(enactment::to_json(report)));
        out << (report.conformant() ? "conformant" : "violating") << ": " << report.violations.size()
            << " violation(s), " << report.prevented.size() << " prevented, coverage " << report.exercised.size()
            << "/" << report.total_tasks << "\n";
        for (const auto& v : report.violations)
            out << "  tick " << v.tick << ": " << v.from << " -> " << v.to << " " << v.operation << " at {" << v.state
                << "}\n";
        return int(report.conformant() ? Ok : Violations);
    });
}

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Adapter and coordination-delegate synthesis for service choreographies", "eipsynth"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path = "project.json";
    std::optional<std::uint64_t> seed;
    std::string out_dir, scenario;
    bool bypass = false;
    app.add_option("--config", config_path, "project file")->capture_default_str();
    app.add_option("--seed", seed, "scheduler seed (overrides the project file)");
    app.add_option("--out", out_dir, "output directory (overrides the project file)");
    app.add_option("--scenario", scenario, "scenario file (overrides the project file)");
    app.add_flag("--bypass-enforcement", bypass, "forward every event, even those the CDs would block");

    auto* infer = app.add_subcommand("infer", "infer data mappings between each service and its CDs");
    auto* confirm = app.add_subcommand("confirm", "resolve ambiguous mappings interactively into the hints file");
    auto* synth = app.add_subcommand("synthesize", "emit CDs and adapters");
    auto* enact = app.add_subcommand("enact", "run the scenario through the synthesized system");
    auto* verify = app.add_subcommand("verify", "enact, then check the trace against the choreography");

    std::vector<std::string> rest(args.size() > 1 ? args.begin() + 1 : args.end(), args.end());
    std::reverse(rest.begin(), rest.end());
    try {
        app.parse(rest);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return Ok;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return Failure;
    }

    ProjectConfig config;
    if (int rc = guarded(err, [&] {
            Overrides o{seed, std::nullopt, std::nullopt, bypass};
            if (!out_dir.empty())
                o.out = out_dir;
            if (!scenario.empty())
                o.scenario = scenario;
            config = apply(load_config(config_path), o);
            fs::create_directories(config.out);
            return int(Ok);
        });
        rc != Ok)
        return rc;

    if (infer->parsed())
        return cmd_infer(config, out, err);
    if (confirm->parsed())
        return cmd_confirm(config, in, out, err);
    if (synth->parsed())
        return cmd_synthesize(config, out, err);
    if (enact->parsed())
        return cmd_enact(config, bypass, out, err);
    return verify->parsed() ? cmd_verify(config, bypass, out, err) : int(Failure);
}

} // namespace eipsynth::cli
