#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "mimoid/channel.hpp"
#include "mimoid/schemes.hpp"
#include "mimoid/txchain.hpp"

namespace mimoid {

/// Parameters of the training-data generator and the LM trainer.
struct TrainingConfig {
    int samples = 2048;       ///< L for single-carrier training
    int ofdm_symbols = 500;   ///< N_b for OFDM training
    int detectors = 64;       ///< N_d for OFDM training
    int trials = 200;         ///< per scheme per SNR point
    std::vector<double> snr_db{-5, 0, 5, 10, 15, 20};
    int hidden = 16;
    int max_epochs = 200;
    double tol = 1e-7;
};

struct ExperimentConfig {
    SystemVariant system = SystemVariant::SingleCarrier;
    int n_r = 8;
    int samples = 256;  ///< L, single-carrier
    OfdmParams ofdm{256, 10, 100};
    int detectors = 32;  ///< N_d
    int taps = 4;
    ModulationSpec modulation{};
    std::vector<SchemeId> schemes{all_schemes().begin(), all_schemes().end()};
    std::vector<double> snr_db{-5, 0, 5, 10, 15, 20};
    ImpairmentSpec impairments{};
    int trials = 200;
    std::uint64_t seed = 1;
    std::string model_dir = "models";
    int threads = 0;  ///< 0: hardware concurrency
    TrainingConfig training{};

    /// Throws ConfigError on an invalid combination.
    void validate() const;
};

/// Canonical JSON text of a configuration (stable key order).
std::string config_to_json(const ExperimentConfig& cfg);

/// Parses JSON over the defaults; unknown keys and bad values raise ConfigError.
ExperimentConfig config_from_json(std::string_view text, ExperimentConfig base = {});
ExperimentConfig load_config(const std::filesystem::path& path);

std::uint64_t fnv1a64(std::string_view data, std::uint64_t h = 0xcbf29ce484222325ULL);
std::string hex64(std::uint64_t v);

/// Canonical JSON without execution-only fields (thread count). Output files
/// echo this form so that they do not depend on the worker count.
std::string canonical_config(const ExperimentConfig& cfg);

/// Hash of canonical_config.
std::uint64_t config_hash(const ExperimentConfig& cfg);

/// Shortest round-trip decimal text of a double.
std::string format_double(double v);

}  // namespace mimoid
