#include "mimoid/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <ostream>
#include <thread>

namespace mimoid {
namespace {

constexpr std::uint64_t kTrainingStream = 0x747261696eULL;

std::size_t kind_index(WindowKind k) { return static_cast<std::size_t>(k); }

std::size_t family_index(FeatureFamily f) { return static_cast<std::size_t>(f); }

int resolve_threads(int requested) {
    if (requested > 0) return requested;
    const unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : static_cast<int>(hc);
}

// Runs body(i) for i in [0, n) on up to `threads` workers. Each index is
// handled by exactly one worker; the caller stores results by index.
template <typename Body>
void parallel_for(std::size_t n, int threads, Body body) {
    const auto workers = static_cast<std::size_t>(std::max(1, std::min<int>(threads, static_cast<int>(n))));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (std::size_t i = w; i < n; i += workers) body(i);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

std::string family_file(SystemVariant system, int n_r, FeatureFamily family) {
    return std::string(name(system)) + "-nr" + std::to_string(n_r) + "-" + std::string(name(family)) + ".json";
}

}  // namespace

const NetworkModel& ModelSet::for_family(FeatureFamily f) const {
    switch (f) {
        case FeatureFamily::Alpha: return alpha;
        case FeatureFamily::Beta: return beta;
        case FeatureFamily::Gamma: return gamma;
    }
    return alpha;
}

NetworkModel& ModelSet::for_family(FeatureFamily f) {
    return const_cast<NetworkModel&>(static_cast<const ModelSet&>(*this).for_family(f));
}

std::uint64_t ModelSet::hash() const {
    std::uint64_t h = fnv1a64(model_to_json(alpha));
    h = fnv1a64(model_to_json(beta), h);
    return fnv1a64(model_to_json(gamma), h);
}

std::filesystem::path model_path(const std::filesystem::path& dir, SystemVariant system, int n_r,
                                 FeatureFamily family) {
    return dir / family_file(system, n_r, family);
}

bool models_exist(const std::filesystem::path& dir, SystemVariant system, int n_r) {
    return std::all_of(kAllFamilies.begin(), kAllFamilies.end(),
                       [&](FeatureFamily f) { return std::filesystem::exists(model_path(dir, system, n_r, f)); });
}

ModelSet load_models(const std::filesystem::path& dir, SystemVariant system, int n_r) {
    ModelSet set;
    for (auto f : kAllFamilies) {
        const auto path = model_path(dir, system, n_r, f);
        if (!std::filesystem::exists(path))
            throw ConfigError("missing model file " + path.string() + " (run `mimoid train` first)");
        try {
            set.for_family(f) = load_model(path);
        } catch (const ModelLoadError& e) {
            throw ConfigError(e.what());
        }
        const NetworkModel& m = set.for_family(f);
        const int expected = covariance_dim(f == FeatureFamily::Alpha  ? WindowKind::Alpha
                                            : f == FeatureFamily::Beta ? WindowKind::Beta1
                                                                       : WindowKind::Gamma1,
                                            n_r) -
                             1;
        if (m.input_dim != expected || m.family != f)
            throw ConfigError(path.string() + " does not fit N_r=" + std::to_string(n_r));
    }
    return set;
}

void save_models(const std::filesystem::path& dir, SystemVariant system, int n_r, const ModelSet& models) {
    std::filesystem::create_directories(dir);
    for (auto f : kAllFamilies) save_model(models.for_family(f), model_path(dir, system, n_r, f));
}

const ModelSet& ModelStore::get(SystemVariant system, int n_r) {
    const auto key = std::make_pair(static_cast<int>(system), n_r);
    auto it = cache_.find(key);
    if (it == cache_.end()) it = cache_.emplace(key, load_models(dir_, system, n_r)).first;
    return it->second;
}

void ModelStore::put(SystemVariant system, int n_r, ModelSet models) {
    cache_[std::make_pair(static_cast<int>(system), n_r)] = std::move(models);
}

ComplexMatrix transmit_single_carrier(SchemeId id, int slots, const ModulationSpec& mod, RandomSource& rng) {
    const auto& d = descriptor(id);
    const int blocks = (slots + d.block_len - 1) / d.block_len;
    const auto n_sym = static_cast<std::size_t>(blocks) * static_cast<std::size_t>(d.symbols_per_block);
    const auto bits = rng.bits(n_sym * static_cast<std::size_t>(mod.bits_per_symbol()));
    const auto symbols = modulate(bits, mod);
    return encode_stream(id, symbols).leftCols(slots) * power_scale(id);
}

TxFrame transmit_ofdm(SystemVariant system, SchemeId id, const OfdmParams& p, const ModulationSpec& mod,
                      RandomSource& rng) {
    const std::size_t n_sym = ofdm_symbols_needed(system, id, p.subcarriers, p.symbols);
    const auto bits = rng.bits(n_sym * static_cast<std::size_t>(mod.bits_per_symbol()));
    const auto symbols = modulate(bits, mod);
    TxFrame f = frame_ofdm(system, id, symbols, p.subcarriers, p.cp_len, p.symbols);
    f.samples *= power_scale(id);
    return f;
}

Received simulate(const ExperimentConfig& cfg, SchemeId id, double snr_db, RandomSource& rng) {
    const int n_t = descriptor(id).n_t;
    Received rx;
    rx.system = cfg.system;
    if (cfg.system == SystemVariant::SingleCarrier) {
        const FlatChannel h = FlatChannel::random(cfg.n_r, n_t, rng);
        const ComplexMatrix tx = transmit_single_carrier(id, cfg.samples, cfg.modulation, rng);
        rx.samples = apply_flat(h, tx, cfg.impairments, snr_db, rng);
    } else {
        const SelectiveChannel h = SelectiveChannel::random(cfg.n_r, n_t, rng, cfg.taps);
        const TxFrame frame = transmit_ofdm(cfg.system, id, cfg.ofdm, cfg.modulation, rng);
        rx.ofdm = apply_selective_ofdm(h, frame, cfg.impairments, snr_db, rng);
    }
    return rx;
}

RadiiSet radii_single_carrier(const ComplexMatrix& y) {
    RadiiSet out;
    for (auto k : kAllWindowKinds) out[kind_index(k)] = gerschgorin_radii(estimate_covariance(y, k));
    return out;
}

RadiiSet radii_ofdm(const OfdmObservation& obs, SystemVariant system, int detectors) {
    if (detectors < 1) throw ConfigError("need at least one detector");
    RadiiSet out;
    if (system == SystemVariant::StbcOfdm) {
        const auto groups = group_stbc_ofdm(obs);
        if (static_cast<std::size_t>(detectors) > groups.size())
            throw ConfigError("STBC-OFDM has only " + std::to_string(groups.size()) + " subcarrier groups");
        std::array<std::vector<RadiiVector>, 6> per_kind;
        for (int p = 0; p < detectors; ++p)
            for (auto k : kAllWindowKinds)
                per_kind[kind_index(k)].push_back(
                    gerschgorin_radii(estimate_covariance(groups[static_cast<std::size_t>(p)], k)));
        for (auto k : kAllWindowKinds) out[kind_index(k)] = combine_detectors(per_kind[kind_index(k)]);
        return out;
    }
    if (system == SystemVariant::SfbcOfdm) {
        for (auto k : kAllWindowKinds) {
            const auto starts = window_starts(k, static_cast<std::size_t>(obs.n_subcarriers()));
            if (static_cast<std::size_t>(detectors) > starts.size())
                throw ConfigError("SFBC-OFDM has only " + std::to_string(starts.size()) + " " +
                                  std::string(name(k)) + " windows");
            std::vector<RadiiVector> det;
            for (int p = 0; p < detectors; ++p)
                det.push_back(gerschgorin_radii(sfbc_covariance(obs, k, starts[static_cast<std::size_t>(p)])));
            out[kind_index(k)] = combine_detectors(det);
        }
        return out;
    }
    throw ArgumentError("radii_ofdm: not an OFDM system");
}

RadiiSet extract_radii(const ExperimentConfig& cfg, const Received& rx) {
    if (rx.system == SystemVariant::SingleCarrier) return radii_single_carrier(rx.samples);
    return radii_ofdm(rx.ofdm, rx.system, cfg.detectors);
}

RadiiSet exact_radii(SchemeId id, const ComplexMatrix& channel, double sigma_w2) {
    RadiiSet out;
    for (auto k : kAllWindowKinds)
        out[kind_index(k)] = gerschgorin_radii(exact_received_covariance(id, k, channel, sigma_w2, power_scale(id)));
    return out;
}

FeatureVector estimate_features(const ModelSet& models, const RadiiSet& radii) {
    FeatureVector f;
    f.alpha = forward(models.alpha, radii[kind_index(WindowKind::Alpha)]);
    f.beta[0] = forward(models.beta, radii[kind_index(WindowKind::Beta1)]);
    f.beta[1] = forward(models.beta, radii[kind_index(WindowKind::Beta2)]);
    f.beta[2] = forward(models.beta, radii[kind_index(WindowKind::Beta3)]);
    f.gamma[0] = forward(models.gamma, radii[kind_index(WindowKind::Gamma1)]);
    f.gamma[1] = forward(models.gamma, radii[kind_index(WindowKind::Gamma2)]);
    return f;
}

RandomSource trial_rng(std::uint64_t seed, SchemeId scheme, std::uint64_t trial) {
    return RandomSource::derive(seed, {index_of(scheme), trial});
}

TrialResult run_trial(const ExperimentConfig& cfg, const ModelSet& models, SchemeId id, double snr_db,
                      RandomSource& rng) {
    const Received rx = simulate(cfg, id, snr_db, rng);
    TrialResult t;
    t.cp_too_short = rx.system != SystemVariant::SingleCarrier && rx.ofdm.cp_too_short;
    t.radii = extract_radii(cfg, rx);
    t.features = estimate_features(models, t.radii);
    t.decision = decide(t.features);
    return t;
}

Decision classify_exact(const ModelSet& models, SchemeId id, const ComplexMatrix& channel, double snr_db) {
    return decide(estimate_features(models, exact_radii(id, channel, noise_variance(snr_db))));
}

ExperimentConfig training_config(const ExperimentConfig& cfg) {
    ExperimentConfig t = cfg;
    t.samples = cfg.training.samples;
    t.ofdm.symbols = cfg.training.ofdm_symbols;
    t.detectors = cfg.training.detectors;
    t.impairments = ImpairmentSpec{};
    t.modulation = ModulationSpec{};
    t.schemes.assign(all_schemes().begin(), all_schemes().end());
    t.snr_db = cfg.training.snr_db;
    t.trials = cfg.training.trials;
    return t;
}

TrainingSets gen_training(const ExperimentConfig& cfg, const LogFn& log) {
    const ExperimentConfig t = training_config(cfg);
    t.validate();
    const std::size_t per_point = kSchemeCount * static_cast<std::size_t>(t.trials);
    const std::size_t total = per_point * t.snr_db.size();
    std::vector<RadiiSet> radii(total);
    std::vector<SchemeId> truth(total);
    const int threads = resolve_threads(t.threads);
    for (std::size_t si = 0; si < t.snr_db.size(); ++si) {
        if (log)
            log("training data: " + std::string(name(t.system)) + " N_r=" + std::to_string(t.n_r) +
                " snr=" + format_double(t.snr_db[si]) + " dB");
        parallel_for(per_point, threads, [&](std::size_t i) {
            const SchemeId id = scheme_at(i / static_cast<std::size_t>(t.trials));
            const std::uint64_t trial = i % static_cast<std::size_t>(t.trials);
            RandomSource rng = RandomSource::derive(t.seed, {kTrainingStream, si, index_of(id), trial});
            const std::size_t slot = si * per_point + i;
            radii[slot] = extract_radii(t, simulate(t, id, t.snr_db[si], rng));
            truth[slot] = id;
        });
    }

    TrainingSets sets;
    for (auto f : kAllFamilies) {
        auto& s = sets[family_index(f)];
        s.family = f;
        s.snr_grid = t.snr_db;
        s.trials_per_point = t.trials;
    }
    for (std::size_t i = 0; i < total; ++i) {
        const auto sig = signature(truth[i]);
        for (auto k : kAllWindowKinds)
            sets[family_index(family_of(k))].add(radii[i][kind_index(k)].R, feature_value(sig, k));
    }
    return sets;
}

void write_training_csv(std::ostream& out, const TrainingSet& set) {
    out << "target";
    for (int i = 1; i <= set.input_dim; ++i) out << ",x" << i;
    out << '\n';
    for (std::size_t r = 0; r < set.size(); ++r) {
        out << format_double(set.targets[r]);
        for (int c = 0; c < set.input_dim; ++c)
            out << ',' << format_double(set.inputs[r * static_cast<std::size_t>(set.input_dim) + static_cast<std::size_t>(c)]);
        out << '\n';
    }
}

TrainedModels train_models(const TrainingSets& sets, const TrainingConfig& training, std::uint64_t seed,
                           const LogFn& log) {
    TrainedModels out;
    for (auto f : kAllFamilies) {
        const auto& data = sets[family_index(f)];
        const std::size_t params =
            static_cast<std::size_t>(training.hidden) * static_cast<std::size_t>(data.input_dim + 2) + 1;
        if (log && data.size() < 10 * params)
            log("warning: " + std::string(name(f)) + " training set has " + std::to_string(data.size()) +
                " rows for " + std::to_string(params) + " parameters");
        TrainOptions opt;
        opt.hidden_dim = training.hidden;
        opt.max_epochs = training.max_epochs;
        opt.tol = training.tol;
        opt.seed = RandomSource::derive(seed, {kTrainingStream, family_index(f)}).next();
        auto res = train_lm(data, opt);
        if (log)
            log("trained " + std::string(name(f)) + " network: " + std::to_string(res.history.size()) +
                " epochs, stop=" + res.stop_reason + ", best validation MSE " + format_double(res.best_val_loss));
        out.models.for_family(f) = res.model;
        out.reports[family_index(f)] = std::move(res);
    }
    return out;
}

ModelSet ensure_models(const ExperimentConfig& cfg, const LogFn& log) {
    if (models_exist(cfg.model_dir, cfg.system, cfg.n_r)) return load_models(cfg.model_dir, cfg.system, cfg.n_r);
    const auto sets = gen_training(cfg, log);
    const auto trained = train_models(sets, cfg.training, cfg.seed, log);
    save_models(cfg.model_dir, cfg.system, cfg.n_r, trained.models);
    return trained.models;
}

std::string_view name(SweepVariable v) {
    switch (v) {
        case SweepVariable::Snr: return "snr";
        case SweepVariable::Samples: return "L";
        case SweepVariable::Nr: return "N_r";
        case SweepVariable::Detectors: return "N_d";
        case SweepVariable::Modulation: return "modulation";
        case SweepVariable::Zeta: return "zeta";
        case SweepVariable::DeltaF: return "delta_f";
        case SweepVariable::Doppler: return "f_d";
        case SweepVariable::Epsilon: return "epsilon";
    }
    return "?";
}

SweepVariable parse_sweep_variable(std::string_view text) {
    for (auto v : {SweepVariable::Snr, SweepVariable::Samples, SweepVariable::Nr, SweepVariable::Detectors,
                   SweepVariable::Modulation, SweepVariable::Zeta, SweepVariable::DeltaF, SweepVariable::Doppler,
                   SweepVariable::Epsilon})
        if (text == name(v)) return v;
    if (text == "samples") return SweepVariable::Samples;
    if (text == "nr") return SweepVariable::Nr;
    if (text == "nd") return SweepVariable::Detectors;
    throw ConfigError("unknown sweep variable '" + std::string(text) + "'");
}

void apply_sweep_value(ExperimentConfig& cfg, SweepVariable v, const std::string& value) {
    auto as_double = [&] {
        std::size_t pos = 0;
        double d = 0.0;
        try {
            d = std::stod(value, &pos);
        } catch (const std::exception&) {
            pos = 0;
        }
        if (pos != value.size() || value.empty())
            throw ConfigError("sweep value '" + value + "' is not a number");
        return d;
    };
    auto as_int = [&] {
        const double d = as_double();
        if (d != std::floor(d)) throw ConfigError("sweep value '" + value + "' is not an integer");
        return static_cast<int>(d);
    };
    switch (v) {
        case SweepVariable::Snr: cfg.snr_db = {as_double()}; break;
        case SweepVariable::Samples: cfg.samples = as_int(); break;
        case SweepVariable::Nr: cfg.n_r = as_int(); break;
        case SweepVariable::Detectors: cfg.detectors = as_int(); break;
        case SweepVariable::Modulation:
            try {
                cfg.modulation = ModulationSpec::parse(value);
            } catch (const ArgumentError& e) {
                throw ConfigError(e.what());
            }
            break;
        case SweepVariable::Zeta: cfg.impairments.zeta = as_double(); break;
        case SweepVariable::DeltaF: cfg.impairments.delta_f = as_double(); break;
        case SweepVariable::Doppler: cfg.impairments.f_d = as_double(); break;
        case SweepVariable::Epsilon: {
            MixtureNoise m;
            if (const auto* cur = std::get_if<MixtureNoise>(&cfg.impairments.noise)) m = *cur;
            m.epsilon = as_double();
            cfg.impairments.noise = m;
            break;
        }
    }
    cfg.validate();
}

PointResult run_point(const ExperimentConfig& cfg, const ModelSet& models, double snr_db) {
    cfg.validate();
    const auto start = std::chrono::steady_clock::now();
    const auto trials = static_cast<std::size_t>(cfg.trials);
    const std::size_t total = cfg.schemes.size() * trials;
    std::vector<TrialOutcome> outcomes(total);
    std::vector<std::uint8_t> cp(total, 0);
    parallel_for(total, resolve_threads(cfg.threads), [&](std::size_t i) {
        const SchemeId id = cfg.schemes[i / trials];
        RandomSource rng = trial_rng(cfg.seed, id, i % trials);
        const TrialResult t = run_trial(cfg, models, id, snr_db, rng);
        outcomes[i] = {id, t.decision.scheme, t.decision.n_t};
        cp[i] = t.cp_too_short ? 1 : 0;
    });
    PointResult r;
    r.score = score(outcomes);
    r.cp_warnings = static_cast<std::size_t>(std::count(cp.begin(), cp.end(), std::uint8_t{1}));
    r.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return r;
}

std::vector<SweepRow> sweep(const ExperimentConfig& cfg, SweepVariable v, const std::vector<std::string>& values,
                            ModelStore& store, const LogFn& log) {
    if (values.empty()) throw ConfigError("sweep needs at least one value");
    std::vector<SweepRow> rows;
    for (const auto& value : values) {
        ExperimentConfig point = cfg;
        apply_sweep_value(point, v, value);
        const ModelSet& models = store.get(point.system, point.n_r);
        for (double snr : point.snr_db) {
            SweepRow row;
            row.value = value;
            row.snr_db = snr;
            row.result = run_point(point, models, snr);
            row.model_hash = models.hash();
            if (log)
                log(std::string(name(v)) + "=" + value + " snr=" + format_double(snr) +
                    ": Pr1=" + format_double(row.result.score.pr1) + " Pr2=" + format_double(row.result.score.pr2));
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

void write_sweep_csv(std::ostream& out, const ExperimentConfig& cfg, SweepVariable v,
                     const std::vector<SweepRow>& rows) {
    const std::string hash = hex64(config_hash(cfg));
    out << "# config " << canonical_config(cfg) << '\n';
    std::vector<std::uint64_t> seen;
    for (const auto& r : rows) {
        if (std::find(seen.begin(), seen.end(), r.model_hash) != seen.end()) continue;
        seen.push_back(r.model_hash);
        out << "# model_hash " << hex64(r.model_hash) << '\n';
    }
    out << "variable,value,snr_db,pr1,pr2";
    for (auto id : cfg.schemes) out << ",acc_" << name(id);
    out << ",cp_warnings,seed,config_hash,model_hash,wall_ms\n";
    for (const auto& r : rows) {
        out << name(v) << ',' << r.value << ',' << format_double(r.snr_db) << ','
            << format_double(r.result.score.pr1) << ',' << format_double(r.result.score.pr2);
        for (auto id : cfg.schemes) out << ',' << format_double(r.result.score.scheme_accuracy(id));
        out << ',' << r.result.cp_warnings << ',' << cfg.seed << ',' << hash << ',' << hex64(r.model_hash) << ','
            << format_double(std::round(r.result.wall_ms * 1000.0) / 1000.0) << '\n';
    }
}

}  // namespace mimoid
