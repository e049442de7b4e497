#include "eipsynth/mapping/interface.hpp"

#include <set>

#include "eipsynth/errors.hpp"
#include "eipsynth/schema/formats.hpp"

namespace eipsynth::mapping {

using schema::MessageSchema;
using schema::QName;

void InterfaceSpec::validate() const
{
    if (!schema::is_identifier(service_name))
        throw InvariantViolation("invalid service name '" + service_name + "'");
    std::set<std::string> names;
    for (const auto& op : operations) {
        if (!names.insert(op.name).second)
            throw InvariantViolation(service_name + ": duplicate operation '" + op.name + "'");
        if (op.output.has_value() != (op.mep == Mep::RequestResponse))
            throw InvariantViolation(service_name + "." + op.name + ": output must be present iff request-response");
        auto check = [&](const MessageSchema& m) {
            if (m.qname().service != service_name || m.qname().operation != op.name)
                throw InvariantViolation(service_name + "." + op.name + ": message qname " + m.qname().str() +
                                         " does not belong to the operation");
        };
        check(op.input);
        if (op.output)
            check(*op.output);
    }
}

const OperationSpec* InterfaceSpec::find(const std::string& operation) const
{
    for (const auto& op : operations)
        if (op.name == operation)
            return &op;
    return nullptr;
}

std::vector<const MessageSchema*> InterfaceSpec::messages() const
{
    std::vector<const MessageSchema*> out;
    for (const auto& op : operations) {
        out.push_back(&op.input);
        if (op.output)
            out.push_back(&*op.output);
    }
    return out;
}

const MessageSchema* InterfaceSpec::message(const QName& qname) const
{
    for (const auto* m : messages())
        if (m->qname() == qname)
            return m;
    return nullptr;
}

MessageSchema message_from_json(const OrderedJson& spec, const QName& qname, const std::filesystem::path& base_dir)
{
    const auto context = qname.str();
    if (!spec.is_object())
        throw ParseError(context + ": message must be an object");
    if (spec.contains("root") == spec.contains("xsd"))
        throw ParseError(context + ": message needs exactly one of 'root' or 'xsd'");
    if (spec.contains("root"))
        return MessageSchema(qname, schema::record_from_json(spec.at("root"), context));
    auto path = base_dir / require_string(spec, "xsd", context);
    return schema::parse_xsd_subset(read_file(path), qname).front();
}

InterfaceSpec interface_from_json(const OrderedJson& doc, const std::filesystem::path& base_dir)
{
    InterfaceSpec iface;
    iface.service_name = require_string(doc, "serviceName", "interface");
    if (!schema::is_identifier(iface.service_name))
        throw ParseError("interface: invalid serviceName '" + iface.service_name + "'");
    const auto& ops = require_member(doc, "operations", iface.service_name);
    if (!ops.is_array())
        throw ParseError(iface.service_name + ": 'operations' must be an array");
    for (const auto& entry : ops) {
        auto name = require_string(entry, "name", iface.service_name + ".operations");
        auto context = iface.service_name + "." + name;
        if (!schema::is_identifier(name))
            throw ParseError(context + ": invalid operation name");
        auto direction = require_string(entry, "direction", context);
        auto mep = entry.contains("mep") ? require_string(entry, "mep", context) : std::string("one-way");

        Direction dir;
        if (direction == "provided")
            dir = Direction::Provided;
        else if (direction == "required")
            dir = Direction::Required;
        else
            throw ParseError(context + ": direction must be provided|required");
        Mep m;
        if (mep == "one-way")
            m = Mep::OneWay;
        else if (mep == "request-response")
            m = Mep::RequestResponse;
        else
            throw ParseError(context + ": mep must be one-way|request-response");

        const auto& input = require_member(entry, "input", context);
        auto in_name = input.contains("message") ? require_string(input, "message", context) : name + "Request";
        OperationSpec op{name, dir, m, message_from_json(input, QName{iface.service_name, name, in_name}, base_dir),
                         std::nullopt};
        if (entry.contains("output")) {
            const auto& output = entry.at("output");
            auto out_name = output.contains("message") ? require_string(output, "message", context) : name + "Response";
            op.output = message_from_json(output, QName{iface.service_name, name, out_name}, base_dir);
        }
        iface.operations.push_back(std::move(op));
    }
    iface.validate();
    return iface;
}

InterfaceSpec load_interface(const std::filesystem::path& path)
{
    auto doc = parse_json_strict(read_file(path), path.string());
    return interface_from_json(doc, path.parent_path());
}

} // namespace eipsynth::mapping
