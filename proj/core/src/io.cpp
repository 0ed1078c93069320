#include "vrvi/io.hpp"

#include <fstream>
#include <limits>
#include <sstream>

#include <nlohmann/json.hpp>

#include "vrvi/generate.hpp"

namespace vrvi {
namespace {

using nlohmann::json;

constexpr std::string_view kInstanceFormat = "vrvi.instance";
constexpr std::string_view kSolutionFormat = "vrvi.solution";
constexpr int kVersion = 1;

const json& field(const json& obj, const char* key) {
    if (!obj.is_object()) throw FormatError("expected an object");
    const auto it = obj.find(key);
    if (it == obj.end()) throw FormatError(std::string("missing field '") + key + "'");
    return *it;
}

template <class T>
T as(const json& value, const char* what) {
    try {
        return value.get<T>();
    } catch (const json::exception&) {
        throw FormatError(std::string("field '") + what + "' has the wrong type");
    }
}

template <class T>
T get(const json& obj, const char* key) {
    return as<T>(field(obj, key), key);
}

json parse_json(std::string_view text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw FormatError(std::string("malformed JSON: ") + e.what());
    }
}

void check_header(const json& doc, std::string_view format) {
    if (get<std::string>(doc, "format") != format)
        throw FormatError("expected format '" + std::string(format) + "'");
    if (get<int>(doc, "version") != kVersion) throw FormatError("unsupported version");
}

json model_json(const MdpModel& m) {
    json rewards = json::array();
    for (StateIndex i = 0; i < m.num_states(); ++i) {
        json row = json::array();
        for (ActionIndex a = 0; a < m.num_actions(); ++a) row.push_back(m.reward(i, a));
        rewards.push_back(std::move(row));
    }
    json transitions = json::array();
    for (StateIndex i = 0; i < m.num_states(); ++i) {
        for (ActionIndex a = 0; a < m.num_actions(); ++a) {
            json probs = json::array();
            const auto s = m.support(i, a);
            const auto p = m.probs(i, a);
            for (std::size_t k = 0; k < s.size(); ++k) probs.push_back(json::array({s[k], p[k]}));
            transitions.push_back({{"state", i}, {"action", a}, {"probs", std::move(probs)}});
        }
    }
    json doc;
    doc["format"] = kInstanceFormat;
    doc["version"] = kVersion;
    doc["num_states"] = m.num_states();
    doc["num_actions"] = m.num_actions();
    doc["reward_bound"] = m.reward_bound();
    doc["rewards"] = std::move(rewards);
    doc["transitions"] = std::move(transitions);
    return doc;
}

MdpModel model_from_json(const json& doc) {
    const auto n = get<std::size_t>(doc, "num_states");
    const auto k = get<std::size_t>(doc, "num_actions");
    if (n == 0 || k == 0) throw FormatError("num_states and num_actions must be positive");
    const auto bound = get<double>(doc, "reward_bound");

    const json& rewards_doc = field(doc, "rewards");
    if (!rewards_doc.is_array() || rewards_doc.size() != n) throw FormatError("rewards must have num_states rows");
    std::vector<double> rewards;
    rewards.reserve(n * k);
    for (const json& row : rewards_doc) {
        if (!row.is_array() || row.size() != k) throw FormatError("each rewards row must have num_actions entries");
        for (const json& r : row) rewards.push_back(as<double>(r, "rewards"));
    }

    std::vector<std::vector<Transition>> rows(n * k);
    std::vector<bool> seen(n * k, false);
    const json& transitions = field(doc, "transitions");
    if (!transitions.is_array()) throw FormatError("transitions must be an array");
    for (const json& rec : transitions) {
        const auto i = get<std::size_t>(rec, "state");
        const auto a = get<std::size_t>(rec, "action");
        if (i >= n || a >= k) throw FormatError("transition record outside the state/action range");
        const std::size_t r = i * k + a;
        if (seen[r]) throw FormatError("duplicate transition record");
        seen[r] = true;
        const json& probs = field(rec, "probs");
        if (!probs.is_array()) throw FormatError("probs must be an array");
        for (const json& entry : probs) {
            if (!entry.is_array() || entry.size() != 2) throw FormatError("probs entries must be [next, probability]");
            const auto j = as<std::uint64_t>(entry[0], "probs");
            if (j > std::numeric_limits<StateIndex>::max()) throw FormatError("next-state index too large");
            rows[r].push_back({static_cast<StateIndex>(j), as<double>(entry[1], "probs")});
        }
    }
    for (std::size_t r = 0; r < rows.size(); ++r)
        if (!seen[r]) throw MissingTransitionError(r / k, r % k);
    return MdpModel(n, k, rows, std::move(rewards), bound);
}

json values_json(std::span<const double> v) { return json(std::vector<double>(v.begin(), v.end())); }

} // namespace

Instance parse_instance(std::string_view text) {
    const json doc = parse_json(text);
    check_header(doc, kInstanceFormat);
    const bool has_discount = doc.contains("discount");
    const bool has_horizon = doc.contains("horizon");
    if (has_discount == has_horizon) throw FormatError("instance needs exactly one of 'discount' or 'horizon'");
    MdpModel model = model_from_json(doc);
    if (has_discount) {
        Dmdp d(std::move(model), get<double>(doc, "discount"));
        validate(d);
        return d;
    }
    FiniteHorizonMdp fh(std::move(model), get<std::int64_t>(doc, "horizon"));
    validate(fh);
    return fh;
}

Instance read_instance(const std::filesystem::path& path) { return parse_instance(read_text_file(path)); }

std::string instance_to_string(const Dmdp& dmdp) {
    json doc = model_json(dmdp);
    doc["discount"] = dmdp.discount();
    return doc.dump(1) + "\n";
}

std::string instance_to_string(const FiniteHorizonMdp& fh) {
    json doc = model_json(fh);
    doc["horizon"] = fh.horizon();
    return doc.dump(1) + "\n";
}

std::string instance_to_string(const Instance& instance) {
    return std::visit([](const auto& m) { return instance_to_string(m); }, instance);
}

std::string fingerprint(const Instance& instance) {
    return std::visit([](const auto& m) { return fingerprint(m); }, instance);
}

const MdpModel& model_of(const Instance& instance) {
    return std::visit([](const auto& m) -> const MdpModel& { return m; }, instance);
}

std::string solution_to_string(const SolutionFile& s) {
    json doc;
    doc["format"] = kSolutionFormat;
    doc["version"] = kVersion;
    doc["algorithm"] = s.algorithm;
    doc["instance"] = s.instance;
    doc["epsilon"] = s.epsilon;
    doc["delta"] = s.delta;
    doc["seed"] = s.seed;
    doc["iterations"] = s.iterations;
    doc["total_samples"] = s.total_samples;
    doc["budget_exhausted"] = s.budget_exhausted;
    doc["values"] = values_json(s.values);
    doc["policy"] = s.policy;
    if (s.schedule) {
        doc["actions"] = s.schedule->actions;
        json stages = json::array();
        for (const auto& v : s.schedule->values) stages.push_back(values_json(v));
        doc["stage_values"] = std::move(stages);
    }
    return doc.dump(1) + "\n";
}

SolutionFile parse_solution(std::string_view text) {
    const json doc = parse_json(text);
    check_header(doc, kSolutionFormat);
    SolutionFile s;
    s.algorithm = get<std::string>(doc, "algorithm");
    s.instance = get<std::string>(doc, "instance");
    s.epsilon = get<double>(doc, "epsilon");
    s.delta = get<double>(doc, "delta");
    s.seed = get<std::uint64_t>(doc, "seed");
    s.iterations = get<std::uint64_t>(doc, "iterations");
    s.total_samples = get<std::uint64_t>(doc, "total_samples");
    s.budget_exhausted = get<bool>(doc, "budget_exhausted");
    s.values = get<ValueVector>(doc, "values");
    s.policy = get<Policy>(doc, "policy");
    if (s.values.size() != s.policy.size()) throw FormatError("values and policy lengths differ");
    if (doc.contains("actions")) {
        NonStationaryPolicy sched;
        sched.actions = get<std::vector<Policy>>(doc, "actions");
        sched.values = get<std::vector<ValueVector>>(doc, "stage_values");
        if (sched.values.size() != sched.actions.size() + 1)
            throw FormatError("stage_values must have one more row than actions");
        s.schedule = std::move(sched);
    }
    return s;
}

SolutionFile read_solution(const std::filesystem::path& path) { return parse_solution(read_text_file(path)); }

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) throw IoError("cannot read " + path.string());
    return buf.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) throw IoError("cannot write " + path.string());
}

} // namespace vrvi
