#include "refprice/config.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include "json.hpp"

namespace refprice {

using nlohmann::json;

namespace {

void check_keys(const json& obj, std::initializer_list<const char*> allowed, const std::string& where) {
    if (!obj.is_object()) throw ConfigError(where + " must be an object");
    for (const auto& item : obj.items()) {
        bool known = false;
        for (const char* k : allowed) known = known || item.key() == k;
        if (!known) throw ConfigError("unknown key '" + where + "." + item.key() + "'");
    }
}

double number(const json& obj, const char* key, const std::string& where, double fallback) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_number()) throw ConfigError(where + "." + key + " must be a number");
    return v.get<double>();
}

std::optional<double> optional_number(const json& obj, const char* key, const std::string& where) {
    if (!obj.contains(key) || obj.at(key).is_null()) return std::nullopt;
    return number(obj, key, where, 0.0);
}

std::int64_t integer(const json& v, const std::string& what) {
    if (v.is_number_integer()) return v.get<std::int64_t>();
    if (v.is_number_float()) {
        const double d = v.get<double>();
        if (std::floor(d) == d && std::abs(d) < 9e15) return static_cast<std::int64_t>(d);
    }
    throw ConfigError(what + " must be an integer");
}

std::string text(const json& obj, const char* key, const std::string& where, const std::string& fallback) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_string()) throw ConfigError(where + "." + key + " must be a string");
    return v.get<std::string>();
}

const json& block(const json& root, const char* name) {
    static const json empty = json::object();
    return root.contains(name) ? root.at(name) : empty;
}

void apply_override(json& root, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0) throw ConfigError("override '" + assignment + "' is not key=value");
    const std::string path = assignment.substr(0, eq);
    const std::string raw = assignment.substr(eq + 1);

    json value;
    try {
        value = json::parse(raw);
    } catch (const json::parse_error&) {
        value = raw;  // bare words such as policy.kind=fixed
    }

    json* node = &root;
    std::stringstream parts(path);
    std::string part;
    std::vector<std::string> keys;
    while (std::getline(parts, part, '.')) {
        if (part.empty()) throw ConfigError("override path '" + path + "' has an empty component");
        keys.push_back(part);
    }
    for (std::size_t i = 0; i + 1 < keys.size(); ++i) {
        json& next = (*node)[keys[i]];
        if (next.is_null()) next = json::object();
        if (!next.is_object()) throw ConfigError("override path '" + path + "' crosses a non-object");
        node = &next;
    }
    (*node)[keys.back()] = value;
}

ExperimentConfig from_json(const json& root) {
    check_keys(root, {"instance", "noise", "policy", "run"}, "config");
    ExperimentConfig c;

    const json& inst = block(root, "instance");
    check_keys(inst, {"a", "b", "eta_plus", "eta_minus", "p_max", "p_ratio_bound"}, "instance");
    InstanceConfig& ic = c.instance;
    ic.a = number(inst, "a", "instance", ic.a);
    ic.b = number(inst, "b", "instance", ic.b);
    ic.eta_plus = number(inst, "eta_plus", "instance", ic.eta_plus);
    ic.eta_minus = number(inst, "eta_minus", "instance", ic.eta_minus);
    ic.p_max = number(inst, "p_max", "instance", ic.p_max);
    ic.p_ratio_bound = number(inst, "p_ratio_bound", "instance", ic.p_ratio_bound);

    const json& noise = block(root, "noise");
    check_keys(noise, {"kind", "half_width", "stddev"}, "noise");
    try {
        c.noise.kind = noise_kind_from_string(text(noise, "kind", "noise", "none"));
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    c.noise.half_width = number(noise, "half_width", "noise", 0.0);
    c.noise.stddev = number(noise, "stddev", "noise", 0.0);

    const json& pol = block(root, "policy");
    check_keys(pol, {"kind", "price", "alpha", "theta", "t1", "t1_constant", "ra", "rb"}, "policy");
    try {
        c.policy.kind = policy_kind_from_string(text(pol, "kind", "policy", "optimal_fixed"));
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    c.policy.price = number(pol, "price", "policy", c.policy.price);
    c.policy.alpha = number(pol, "alpha", "policy", c.policy.alpha);
    if (pol.contains("theta") && !pol.at("theta").is_null()) {
        const json& th = pol.at("theta");
        check_keys(th, {"c1", "c2"}, "policy.theta");
        if (!th.contains("c1") || !th.contains("c2")) throw ConfigError("policy.theta needs c1 and c2");
        try {
            c.policy.theta = PolicyParams(number(th, "c1", "policy.theta", 0.0), number(th, "c2", "policy.theta", 0.0));
        } catch (const std::exception& e) {
            throw ConfigError(std::string("policy.theta: ") + e.what());
        }
    }
    if (pol.contains("t1") && !pol.at("t1").is_null()) c.policy.learn.t1 = integer(pol.at("t1"), "policy.t1");
    c.policy.learn.t1_constant = number(pol, "t1_constant", "policy", c.policy.learn.t1_constant);
    c.policy.learn.ra = optional_number(pol, "ra", "policy");
    c.policy.learn.rb = optional_number(pol, "rb", "policy");

    const json& run = block(root, "run");
    check_keys(run, {"T", "seeds", "base_seed", "r1", "out", "threads"}, "run");
    if (run.contains("T")) {
        const json& t = run.at("T");
        c.run.horizons.clear();
        if (t.is_array()) {
            for (const json& v : t) c.run.horizons.push_back(integer(v, "run.T entries"));
        } else {
            c.run.horizons.push_back(integer(t, "run.T"));
        }
    }
    if (run.contains("seeds")) c.run.seeds = static_cast<int>(integer(run.at("seeds"), "run.seeds"));
    if (run.contains("base_seed")) {
        const json& s = run.at("base_seed");
        if (s.is_number_unsigned()) {
            c.run.base_seed = s.get<std::uint64_t>();
        } else {
            const std::int64_t v = integer(s, "run.base_seed");
            if (v < 0) throw ConfigError("run.base_seed must be nonnegative");
            c.run.base_seed = static_cast<std::uint64_t>(v);
        }
    }
    c.run.r1 = optional_number(run, "r1", "run");
    c.run.out = text(run, "out", "run", c.run.out);
    if (run.contains("threads")) c.run.threads = static_cast<int>(integer(run.at("threads"), "run.threads"));
    return c;
}

}  // namespace

void validate_config(const ExperimentConfig& c) {
    std::optional<Instance> inst;
    try {
        inst.emplace(c.instance.build());
    } catch (const std::exception& e) {
        throw ConfigError(std::string("instance: ") + e.what());
    }
    if (!(c.noise.half_width >= 0.0 && std::isfinite(c.noise.half_width)))
        throw ConfigError("noise.half_width must be finite and nonnegative");
    if (!(c.noise.stddev >= 0.0 && std::isfinite(c.noise.stddev)))
        throw ConfigError("noise.stddev must be finite and nonnegative");
    try {
        c.policy.validate(*inst);
    } catch (const std::exception& e) {
        throw ConfigError(std::string("policy: ") + e.what());
    }
    if (c.run.horizons.empty()) throw ConfigError("run.T must list at least one horizon");
    for (std::int64_t t : c.run.horizons)
        if (t < 1) throw ConfigError("run.T entries must be positive");
    if (c.run.seeds < 1) throw ConfigError("run.seeds must be at least 1");
    if (c.run.threads < 1) throw ConfigError("run.threads must be at least 1");
    const double r1 = c.start_reference();
    if (!(r1 >= 0.0 && r1 <= c.instance.p_max)) throw ConfigError("run.r1 must lie in [0, p_max]");
    if (c.run.out.empty()) throw ConfigError("run.out must not be empty");
}

ExperimentConfig parse_config(const std::string& json_text, const std::vector<std::string>& overrides,
                              const std::optional<std::string>& seed_env) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!root.is_object()) throw ConfigError("config must be a JSON object");
    if (seed_env) apply_override(root, "run.base_seed=" + *seed_env);
    for (const std::string& o : overrides) apply_override(root, o);
    ExperimentConfig c = from_json(root);
    validate_config(c);
    return c;
}

ExperimentConfig load_config(const std::string& path, const std::vector<std::string>& overrides,
                             const std::optional<std::string>& seed_env) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str(), overrides, seed_env);
}

std::string serialize_config(const ExperimentConfig& c) {
    json root;
    root["instance"] = {{"a", c.instance.a},
                        {"b", c.instance.b},
                        {"eta_plus", c.instance.eta_plus},
                        {"eta_minus", c.instance.eta_minus},
                        {"p_max", c.instance.p_max},
                        {"p_ratio_bound", c.instance.p_ratio_bound}};
    root["noise"] = {{"kind", to_string(c.noise.kind)},
                     {"half_width", c.noise.half_width},
                     {"stddev", c.noise.stddev}};
    json pol = {{"kind", to_string(c.policy.kind)},
                {"price", c.policy.price},
                {"alpha", c.policy.alpha},
                {"t1_constant", c.policy.learn.t1_constant}};
    if (c.policy.theta) pol["theta"] = {{"c1", c.policy.theta->c1}, {"c2", c.policy.theta->c2}};
    if (c.policy.learn.t1) pol["t1"] = *c.policy.learn.t1;
    if (c.policy.learn.ra) pol["ra"] = *c.policy.learn.ra;
    if (c.policy.learn.rb) pol["rb"] = *c.policy.learn.rb;
    root["policy"] = pol;
    json run = {{"T", c.run.horizons},
                {"seeds", c.run.seeds},
                {"base_seed", c.run.base_seed},
                {"out", c.run.out},
                {"threads", c.run.threads}};
    if (c.run.r1) run["r1"] = *c.run.r1;
    root["run"] = run;
    return root.dump(2) + "\n";
}

}  // namespace refprice
