#include "gwext/io.hpp"

#include <fstream>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "json.hpp"

namespace gwext {

namespace {

std::string json_name(const nlohmann::json& v) {
    return v.is_string() ? v.get<std::string>()
                         : std::to_string(v.get<std::int64_t>());
}

}  // namespace

TypeId LoadedProcess::type_by_name(const std::string& name) const {
    for (std::size_t i = 0; i < type_names.size(); ++i)
        if (type_names[i] == name) return TypeId{i};
    throw std::domain_error("unknown type name: " + name);
}

SubsetSpec LoadedProcess::subset_from_list(const std::string& csv) const {
    if (csv == "all") return full_subset();
    if (csv.empty() || csv == "none") return empty_subset();
    auto members = std::make_shared<std::vector<bool>>(type_names.size(), false);
    std::istringstream in(csv);
    std::string tok;
    while (std::getline(in, tok, ',')) {
        auto b = tok.find_first_not_of(" \t");
        auto e = tok.find_last_not_of(" \t");
        if (b == std::string::npos) continue;
        (*members)[type_by_name(tok.substr(b, e - b + 1)).index] = true;
    }
    return SubsetSpec{"{" + csv + "}",
                      [members](TypeId t) {
                          return t.index < members->size() && (*members)[t.index];
                      },
                      true};
}

LoadedProcess parse_process_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    if (!j.contains("types") || !j.contains("laws"))
        throw std::invalid_argument("process json: need \"types\" and \"laws\"");
    std::vector<std::string> names;
    for (const auto& t : j["types"]) names.push_back(json_name(t));
    std::unordered_map<std::string, std::uint64_t> index;
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (index.count(names[i]))
            throw std::invalid_argument("process json: duplicate type " +
                                        names[i]);
        index[names[i]] = i;
    }
    auto type_of = [&index](const std::string& name) {
        auto it = index.find(name);
        if (it == index.end())
            throw std::invalid_argument("process json: unknown child type " +
                                        name);
        return TypeId{it->second};
    };

    auto laws = std::make_shared<std::vector<OffspringLaw>>();
    laws->resize(names.size(), barren_law());
    const auto& jlaws = j["laws"];
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (!jlaws.contains(names[i]))
            throw std::invalid_argument("process json: missing law for " +
                                        names[i]);
        const auto& jl = jlaws[names[i]];
        std::string form = jl.at("form").get<std::string>();
        if (form == "explicit") {
            std::vector<JointOutcome> outcomes;
            for (const auto& jo : jl.at("outcomes")) {
                JointOutcome o;
                o.prob = jo.at("prob").get<double>();
                for (const auto& [key, val] : jo.at("children").items())
                    o.children.push_back(
                        {type_of(key), val.get<std::uint32_t>()});
                outcomes.push_back(std::move(o));
            }
            (*laws)[i] = joint_law(std::move(outcomes));
        } else if (form == "product") {
            std::vector<CountComponent> comps;
            for (const auto& jc : jl.at("components")) {
                TypeId child = type_of(json_name(jc.at("child")));
                std::string kind = jc.at("law").get<std::string>();
                if (kind == "bernoulli") {
                    comps.push_back(CountComponent::bernoulli(
                        child, jc.at("p").get<double>()));
                } else if (kind == "deterministic") {
                    comps.push_back(CountComponent::deterministic(
                        child, jc.at("n").get<std::uint32_t>()));
                } else if (kind == "geometric") {
                    comps.push_back(CountComponent::geometric(
                        child, jc.at("mean").get<double>()));
                } else if (kind == "explicit") {
                    std::vector<std::pair<std::uint32_t, double>> pmf;
                    for (const auto& entry : jc.at("pmf"))
                        pmf.push_back({entry.at(0).get<std::uint32_t>(),
                                       entry.at(1).get<double>()});
                    comps.push_back(
                        CountComponent::explicit_finite(child, std::move(pmf)));
                } else {
                    throw std::invalid_argument(
                        "process json: unknown component law " + kind);
                }
            }
            (*laws)[i] = product_law(std::move(comps));
        } else {
            throw std::invalid_argument("process json: unknown form " + form);
        }
        (*laws)[i].validate();
    }

    auto names_shared = std::make_shared<std::vector<std::string>>(names);
    std::string pname = j.value("name", std::string("json-process"));
    ProcessSpec spec(
        pname, names.size(), [laws](TypeId t) { return (*laws)[t.index]; },
        [names_shared](TypeId t) { return (*names_shared)[t.index]; });
    return LoadedProcess{std::move(spec), std::move(names)};
}

LoadedProcess load_process_json(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::invalid_argument("process json: cannot open " + path);
    std::ostringstream buf;
    buf << f.rdbuf();
    return parse_process_json(buf.str());
}

}  // namespace gwext
