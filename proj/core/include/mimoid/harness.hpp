#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "mimoid/channel.hpp"
#include "mimoid/classifier.hpp"
#include "mimoid/config.hpp"
#include "mimoid/fnn.hpp"
#include "mimoid/rng.hpp"
#include "mimoid/subspace.hpp"

namespace mimoid {

/// Radii of the six window kinds, in kAllWindowKinds order.
using RadiiSet = std::array<RadiiVector, 6>;

using LogFn = std::function<void(const std::string&)>;

struct ModelSet {
    NetworkModel alpha;
    NetworkModel beta;
    NetworkModel gamma;

    const NetworkModel& for_family(FeatureFamily f) const;
    NetworkModel& for_family(FeatureFamily f);
    /// FNV-1a 64 over the serialized models.
    std::uint64_t hash() const;
};

std::filesystem::path model_path(const std::filesystem::path& dir, SystemVariant system, int n_r,
                                 FeatureFamily family);
bool models_exist(const std::filesystem::path& dir, SystemVariant system, int n_r);
/// Throws ConfigError when a model file is missing or unreadable.
ModelSet load_models(const std::filesystem::path& dir, SystemVariant system, int n_r);
void save_models(const std::filesystem::path& dir, SystemVariant system, int n_r, const ModelSet& models);

/// Caches model sets per (system, N_r) loaded from one directory.
class ModelStore {
public:
    explicit ModelStore(std::filesystem::path dir) : dir_(std::move(dir)) {}
    const ModelSet& get(SystemVariant system, int n_r);
    void put(SystemVariant system, int n_r, ModelSet models);
    const std::filesystem::path& dir() const { return dir_; }

private:
    std::filesystem::path dir_;
    std::map<std::pair<int, int>, ModelSet> cache_;
};

/// Power-normalized single-carrier transmit block of `slots` columns.
ComplexMatrix transmit_single_carrier(SchemeId id, int slots, const ModulationSpec& mod, RandomSource& rng);

/// Power-normalized OFDM frame.
TxFrame transmit_ofdm(SystemVariant system, SchemeId id, const OfdmParams& params, const ModulationSpec& mod,
                      RandomSource& rng);

struct Received {
    SystemVariant system = SystemVariant::SingleCarrier;
    ComplexMatrix samples;  ///< single-carrier observations, N_r x L
    OfdmObservation ofdm;   ///< OFDM per-subcarrier observations
};

/// Channel draw, transmission and impairments for one trial.
Received simulate(const ExperimentConfig& cfg, SchemeId id, double snr_db, RandomSource& rng);

RadiiSet radii_single_carrier(const ComplexMatrix& y);
/// Combined radii of the first `detectors` groups (STBC) or window starts (SFBC).
RadiiSet radii_ofdm(const OfdmObservation& obs, SystemVariant system, int detectors);
RadiiSet extract_radii(const ExperimentConfig& cfg, const Received& rx);

/// Radii of the exact received covariances (power-normalized scheme, noise σ_w²).
RadiiSet exact_radii(SchemeId id, const ComplexMatrix& channel, double sigma_w2);

FeatureVector estimate_features(const ModelSet& models, const RadiiSet& radii);

struct TrialResult {
    Decision decision;
    FeatureVector features;
    RadiiSet radii;
    bool cp_too_short = false;
};

/// Stream for trial `trial` of `scheme`; shared by every grid point of a sweep.
RandomSource trial_rng(std::uint64_t seed, SchemeId scheme, std::uint64_t trial);

TrialResult run_trial(const ExperimentConfig& cfg, const ModelSet& models, SchemeId id, double snr_db,
                      RandomSource& rng);

/// Decision from exact covariances at the given SNR, bypassing estimation.
Decision classify_exact(const ModelSet& models, SchemeId id, const ComplexMatrix& channel, double snr_db);

/// Training sets for the Alpha, Beta and Gamma networks.
using TrainingSets = std::array<TrainingSet, 3>;

/// Configuration actually used for training-data generation (training sizes, no impairments, 4-PSK).
ExperimentConfig training_config(const ExperimentConfig& cfg);

TrainingSets gen_training(const ExperimentConfig& cfg, const LogFn& log = {});

/// CSV with header "target,x1,...,xJ-1"; rows are normalized radii.
void write_training_csv(std::ostream& out, const TrainingSet& set);

struct TrainedModels {
    ModelSet models;
    std::array<TrainResult, 3> reports;
};

TrainedModels train_models(const TrainingSets& sets, const TrainingConfig& training, std::uint64_t seed,
                           const LogFn& log = {});

/// Generates data and trains the (system, N_r) model set of `cfg` into cfg.model_dir
/// unless all three files already exist.
ModelSet ensure_models(const ExperimentConfig& cfg, const LogFn& log = {});

enum class SweepVariable : std::uint8_t { Snr, Samples, Nr, Detectors, Modulation, Zeta, DeltaF, Doppler, Epsilon };

std::string_view name(SweepVariable v);
SweepVariable parse_sweep_variable(std::string_view text);
/// Sets one configuration field from its textual value. Throws ConfigError.
void apply_sweep_value(ExperimentConfig& cfg, SweepVariable v, const std::string& value);

struct PointResult {
    Score score;
    std::size_t cp_warnings = 0;
    double wall_ms = 0.0;
};

/// cfg.trials trials per scheme at one SNR, with trial streams from trial_rng.
PointResult run_point(const ExperimentConfig& cfg, const ModelSet& models, double snr_db);

struct SweepRow {
    std::string value;
    double snr_db = 0.0;
    PointResult result;
    std::uint64_t model_hash = 0;
};

/// For `snr` every grid value is one row; for other variables each value is
/// crossed with cfg.snr_db.
std::vector<SweepRow> sweep(const ExperimentConfig& cfg, SweepVariable v, const std::vector<std::string>& values,
                            ModelStore& store, const LogFn& log = {});

/// Comment lines with the resolved config, then a header and one row per point.
/// wall_ms is the last column.
void write_sweep_csv(std::ostream& out, const ExperimentConfig& cfg, SweepVariable v,
                     const std::vector<SweepRow>& rows);

}  // namespace mimoid
