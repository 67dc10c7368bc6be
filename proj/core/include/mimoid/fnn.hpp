#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "mimoid/subspace.hpp"
#include "mimoid/types.hpp"
#include "mimoid/windows.hpp"

namespace mimoid {

/// Three-layer regression network: sigmoid hidden layer, one linear output.
/// Inputs are radii divided by their maximum component.
struct NetworkModel {
    int input_dim = 0;
    int hidden_dim = 0;
    RealMatrix W1;  ///< hidden x input
    RealVector b1;
    RealVector w2;
    double b2 = 0.0;
    FeatureFamily family = FeatureFamily::Alpha;

    static NetworkModel zeros(int input_dim, int hidden_dim);

    int parameter_count() const { return hidden_dim * (input_dim + 1) + hidden_dim + 1; }
    /// Flattened as [W1 row-major, b1, w2, b2].
    RealVector parameters() const;
    void set_parameters(const RealVector& theta);

    friend bool operator==(const NetworkModel& a, const NetworkModel& b);
};

double sigmoid(double x);

/// R / max(R); the all-zero vector maps to itself.
RealVector normalize_radii(std::span<const double> radii);

/// Output on an already-normalized input.
double forward_normalized(const NetworkModel& model, const RealVector& x);

/// Output on raw radii (normalized internally). Throws ArgumentError on length mismatch.
double forward(const NetworkModel& model, std::span<const double> radii);
double forward(const NetworkModel& model, const RadiiVector& radii);

/// Jacobian of the network output with respect to parameters() at each input
/// row (rows x parameter_count).
RealMatrix output_jacobian(const NetworkModel& model, const RealMatrix& inputs);

struct TrainingSet {
    FeatureFamily family = FeatureFamily::Alpha;
    int input_dim = 0;
    std::vector<double> inputs;  ///< row-major, normalized
    std::vector<double> targets;
    std::vector<double> snr_grid;
    int trials_per_point = 0;

    std::size_t size() const { return targets.size(); }
    /// Normalizes `radii` and appends it with its target.
    void add(std::span<const double> radii, double target);
    /// Appends an already-normalized row.
    void add_normalized(std::span<const double> x, double target);
    RealMatrix input_matrix() const;
    RealVector target_vector() const;
};

struct TrainOptions {
    int hidden_dim = 16;
    std::uint64_t seed = 1;
    int max_epochs = 200;
    double tol = 1e-7;             ///< stop when the gradient norm falls below
    double lambda_init = 1e-3;
    double lambda_max = 1e10;
    double validation_fraction = 0.1;
};

struct EpochRecord {
    int epoch = 0;
    double loss = 0.0;      ///< training mean squared error
    double val_loss = 0.0;  ///< validation mean squared error
    double lambda = 0.0;
    double grad_norm = 0.0;
};

struct TrainResult {
    NetworkModel model;  ///< lowest validation error seen
    std::vector<EpochRecord> history;
    std::string stop_reason;
    double best_val_loss = 0.0;
};

/// Generic Levenberg-Marquardt on a sum-of-squares objective. `residuals`
/// returns e(θ); `normal` fills JᵀJ and Jᵀe at θ. Called back after every
/// accepted step with the new parameters.
struct LmProblem {
    std::function<RealVector(const RealVector&)> residuals;
    std::function<void(const RealVector&, RealMatrix& jtj, RealVector& jte)> normal;
    std::function<void(int epoch, const RealVector& theta, double loss, double lambda, double grad_norm)> on_accept;
};

struct LmOutcome {
    RealVector theta;
    double loss = 0.0;  ///< ½‖e‖²
    int epochs = 0;
    std::string stop_reason;
};

LmOutcome levenberg_marquardt(const LmProblem& problem, RealVector theta, int max_epochs, double tol,
                              double lambda_init, double lambda_max);

/// Trains one network with Levenberg-Marquardt on a seeded 90/10 split and
/// returns the model with the best validation error. Throws TrainingError on
/// non-finite residuals or an empty set.
TrainResult train_lm(const TrainingSet& data, const TrainOptions& options);

std::string model_to_json(const NetworkModel& model);
NetworkModel model_from_json(const std::string& text);
void save_model(const NetworkModel& model, const std::filesystem::path& path);
NetworkModel load_model(const std::filesystem::path& path);

}  // namespace mimoid
