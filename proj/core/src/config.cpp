#include "mimoid/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace mimoid {
namespace {

using json = nlohmann::ordered_json;

json to_json(const ExperimentConfig& c) {
    json j;
    j["system"] = std::string(name(c.system));
    j["n_r"] = c.n_r;
    j["samples"] = c.samples;
    j["subcarriers"] = c.ofdm.subcarriers;
    j["cp_len"] = c.ofdm.cp_len;
    j["ofdm_symbols"] = c.ofdm.symbols;
    j["detectors"] = c.detectors;
    j["taps"] = c.taps;
    j["modulation"] = c.modulation.label();
    json schemes = json::array();
    for (auto id : c.schemes) schemes.push_back(std::string(name(id)));
    j["schemes"] = schemes;
    j["snr_db"] = c.snr_db;
    json imp;
    imp["zeta"] = c.impairments.zeta;
    imp["delta_f"] = c.impairments.delta_f;
    imp["f_d"] = c.impairments.f_d;
    if (const auto* m = std::get_if<MixtureNoise>(&c.impairments.noise)) {
        imp["noise"] = json{{"model", "mixture"}, {"epsilon", m->epsilon}, {"eta", m->eta}};
    } else {
        imp["noise"] = json{{"model", "gaussian"}};
    }
    j["impairments"] = imp;
    j["trials"] = c.trials;
    j["seed"] = c.seed;
    j["model_dir"] = c.model_dir;
    j["threads"] = c.threads;
    json t;
    t["samples"] = c.training.samples;
    t["ofdm_symbols"] = c.training.ofdm_symbols;
    t["detectors"] = c.training.detectors;
    t["trials"] = c.training.trials;
    t["snr_db"] = c.training.snr_db;
    t["hidden"] = c.training.hidden;
    t["max_epochs"] = c.training.max_epochs;
    t["tol"] = c.training.tol;
    j["training"] = t;
    return j;
}

void check_keys(const json& j, std::initializer_list<const char*> allowed, const std::string& where) {
    if (!j.is_object()) throw ConfigError(where + " must be an object");
    std::set<std::string> ok(allowed.begin(), allowed.end());
    for (const auto& [key, _] : j.items())
        if (!ok.count(key)) throw ConfigError("unknown config key '" + where + key + "'");
}

template <typename T>
void read(const json& j, const char* key, T& out) {
    if (!j.contains(key)) return;
    try {
        out = j.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError(std::string("config key '") + key + "' has the wrong type");
    }
}

}  // namespace

void ExperimentConfig::validate() const {
    if (n_r < 1) throw ConfigError("n_r must be >= 1");
    if (system == SystemVariant::SingleCarrier && samples < 8) throw ConfigError("samples must be >= 8");
    if (trials < 1) throw ConfigError("trials must be >= 1");
    if (schemes.empty()) throw ConfigError("scheme pool is empty");
    if (snr_db.empty()) throw ConfigError("SNR grid is empty");
    for (double s : snr_db)
        if (std::isnan(s)) throw ConfigError("SNR grid contains NaN");
    if (taps < 1) throw ConfigError("taps must be >= 1");
    if (detectors < 1) throw ConfigError("detectors must be >= 1");
    if (system != SystemVariant::SingleCarrier) {
        if (ofdm.subcarriers < 8 || ofdm.subcarriers % 4 != 0)
            throw ConfigError("subcarriers must be a multiple of 4 and >= 8");
        if (ofdm.cp_len < 0 || ofdm.cp_len > ofdm.subcarriers) throw ConfigError("cp_len out of range");
        if (ofdm.symbols < 1) throw ConfigError("ofdm_symbols must be >= 1");
        if (system == SystemVariant::StbcOfdm && detectors > ofdm.subcarriers / 4)
            throw ConfigError("STBC-OFDM supports at most N/4 = " + std::to_string(ofdm.subcarriers / 4) +
                              " detectors");
        if (system == SystemVariant::SfbcOfdm) {
            if (detectors > ofdm.subcarriers / 4)
                throw ConfigError("SFBC-OFDM supports at most N/4 = " + std::to_string(ofdm.subcarriers / 4) +
                                  " detectors");
            for (auto id : schemes)
                if (ofdm.subcarriers % descriptor(id).block_len != 0)
                    throw ConfigError("SFBC-OFDM needs N divisible by T=" +
                                      std::to_string(descriptor(id).block_len) + " (" + std::string(name(id)) + ")");
        }
    }
    try {
        impairments.validate();
    } catch (const ArgumentError& e) {
        throw ConfigError(e.what());
    }
    if (training.samples < 8 || training.ofdm_symbols < 1 || training.detectors < 1 || training.trials < 1)
        throw ConfigError("training sizes must be positive");
    if (training.snr_db.empty()) throw ConfigError("training SNR grid is empty");
    if (training.hidden < 1) throw ConfigError("training.hidden must be >= 1");
    if (training.max_epochs < 1) throw ConfigError("training.max_epochs must be >= 1");
}

std::string config_to_json(const ExperimentConfig& cfg) { return to_json(cfg).dump(); }

ExperimentConfig config_from_json(std::string_view text, ExperimentConfig c) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    check_keys(j,
               {"system", "n_r", "samples", "subcarriers", "cp_len", "ofdm_symbols", "detectors", "taps",
                "modulation", "schemes", "snr_db", "impairments", "trials", "seed", "model_dir", "threads",
                "training"},
               "");
    try {
        if (j.contains("system")) c.system = parse_system(j.at("system").get<std::string>());
        if (j.contains("modulation")) c.modulation = ModulationSpec::parse(j.at("modulation").get<std::string>());
    } catch (const ArgumentError& e) {
        throw ConfigError(e.what());
    } catch (const json::exception&) {
        throw ConfigError("system/modulation must be strings");
    }
    read(j, "n_r", c.n_r);
    read(j, "samples", c.samples);
    read(j, "subcarriers", c.ofdm.subcarriers);
    read(j, "cp_len", c.ofdm.cp_len);
    read(j, "ofdm_symbols", c.ofdm.symbols);
    read(j, "detectors", c.detectors);
    read(j, "taps", c.taps);
    read(j, "snr_db", c.snr_db);
    read(j, "trials", c.trials);
    read(j, "seed", c.seed);
    read(j, "model_dir", c.model_dir);
    read(j, "threads", c.threads);
    if (j.contains("schemes")) {
        std::vector<std::string> names;
        read(j, "schemes", names);
        c.schemes.clear();
        for (const auto& n : names) {
            const auto id = parse_scheme(n);
            if (!id) throw ConfigError("unknown scheme '" + n + "'");
            c.schemes.push_back(*id);
        }
    }
    if (j.contains("impairments")) {
        const auto& imp = j.at("impairments");
        check_keys(imp, {"zeta", "delta_f", "f_d", "noise"}, "impairments.");
        read(imp, "zeta", c.impairments.zeta);
        read(imp, "delta_f", c.impairments.delta_f);
        read(imp, "f_d", c.impairments.f_d);
        if (imp.contains("noise")) {
            const auto& nz = imp.at("noise");
            check_keys(nz, {"model", "epsilon", "eta"}, "impairments.noise.");
            std::string model = "gaussian";
            read(nz, "model", model);
            if (model == "gaussian") {
                c.impairments.noise = GaussianNoise{};
            } else if (model == "mixture") {
                MixtureNoise m;
                read(nz, "epsilon", m.epsilon);
                read(nz, "eta", m.eta);
                c.impairments.noise = m;
            } else {
                throw ConfigError("unknown noise model '" + model + "'");
            }
        }
    }
    if (j.contains("training")) {
        const auto& t = j.at("training");
        check_keys(t, {"samples", "ofdm_symbols", "detectors", "trials", "snr_db", "hidden", "max_epochs", "tol"},
                   "training.");
        read(t, "samples", c.training.samples);
        read(t, "ofdm_symbols", c.training.ofdm_symbols);
        read(t, "detectors", c.training.detectors);
        read(t, "trials", c.training.trials);
        read(t, "snr_db", c.training.snr_db);
        read(t, "hidden", c.training.hidden);
        read(t, "max_epochs", c.training.max_epochs);
        read(t, "tol", c.training.tol);
    }
    c.validate();
    return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return config_from_json(ss.str());
}

std::uint64_t fnv1a64(std::string_view data, std::uint64_t h) {
    for (unsigned char ch : data) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

std::string canonical_config(const ExperimentConfig& cfg) {
    json j = to_json(cfg);
    j.erase("threads");
    return j.dump();
}

std::uint64_t config_hash(const ExperimentConfig& cfg) { return fnv1a64(canonical_config(cfg)); }

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

}  // namespace mimoid
