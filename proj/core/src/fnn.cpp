#include "mimoid/fnn.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "mimoid/rng.hpp"

namespace mimoid {
namespace {

constexpr const char* kFormat = "mimoid-fnn";
constexpr int kVersion = 1;
constexpr Eigen::Index kChunk = 256;

// Hidden activations for a block of input rows (rows x hidden).
RealMatrix hidden_layer(const NetworkModel& m, const RealMatrix& x) {
    RealMatrix z = x * m.W1.transpose();
    z.rowwise() += m.b1.transpose();
    return z.unaryExpr([](double v) { return sigmoid(v); });
}

RealVector predict(const NetworkModel& m, const RealMatrix& x) {
    RealVector out = hidden_layer(m, x) * m.w2;
    out.array() += m.b2;
    return out;
}

RealMatrix jacobian_rows(const NetworkModel& m, const RealMatrix& x) {
    const Eigen::Index n = x.rows();
    const int in = m.input_dim;
    const int hid = m.hidden_dim;
    const RealMatrix h = hidden_layer(m, x);
    RealMatrix j(n, m.parameter_count());
    for (Eigen::Index r = 0; r < n; ++r) {
        for (int i = 0; i < hid; ++i) {
            const double g = m.w2(i) * h(r, i) * (1.0 - h(r, i));
            for (int c = 0; c < in; ++c) j(r, i * in + c) = g * x(r, c);
            j(r, hid * in + i) = g;
            j(r, hid * in + hid + i) = h(r, i);
        }
        j(r, m.parameter_count() - 1) = 1.0;
    }
    return j;
}

std::vector<double> to_vector(const RealMatrix& m) {
    std::vector<double> v;
    v.reserve(static_cast<std::size_t>(m.size()));
    for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c) v.push_back(m(r, c));
    return v;
}

FeatureFamily parse_family(const std::string& s) {
    if (s == "alpha") return FeatureFamily::Alpha;
    if (s == "beta") return FeatureFamily::Beta;
    if (s == "gamma") return FeatureFamily::Gamma;
    throw ModelLoadError("unknown feature family '" + s + "'");
}

}  // namespace

NetworkModel NetworkModel::zeros(int input_dim, int hidden_dim) {
    if (input_dim <= 0 || hidden_dim <= 0) throw ArgumentError("NetworkModel: dimensions must be positive");
    NetworkModel m;
    m.input_dim = input_dim;
    m.hidden_dim = hidden_dim;
    m.W1 = RealMatrix::Zero(hidden_dim, input_dim);
    m.b1 = RealVector::Zero(hidden_dim);
    m.w2 = RealVector::Zero(hidden_dim);
    return m;
}

RealVector NetworkModel::parameters() const {
    RealVector t(parameter_count());
    Eigen::Index k = 0;
    for (int i = 0; i < hidden_dim; ++i)
        for (int c = 0; c < input_dim; ++c) t(k++) = W1(i, c);
    t.segment(k, hidden_dim) = b1;
    k += hidden_dim;
    t.segment(k, hidden_dim) = w2;
    k += hidden_dim;
    t(k) = b2;
    return t;
}

void NetworkModel::set_parameters(const RealVector& t) {
    if (t.size() != parameter_count()) throw ArgumentError("set_parameters: wrong parameter count");
    Eigen::Index k = 0;
    for (int i = 0; i < hidden_dim; ++i)
        for (int c = 0; c < input_dim; ++c) W1(i, c) = t(k++);
    b1 = t.segment(k, hidden_dim);
    k += hidden_dim;
    w2 = t.segment(k, hidden_dim);
    k += hidden_dim;
    b2 = t(k);
}

bool operator==(const NetworkModel& a, const NetworkModel& b) {
    return a.input_dim == b.input_dim && a.hidden_dim == b.hidden_dim && a.family == b.family && a.b2 == b.b2 &&
           a.W1 == b.W1 && a.b1 == b.b1 && a.w2 == b.w2;
}

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

RealVector normalize_radii(std::span<const double> radii) {
    RealVector x(static_cast<Eigen::Index>(radii.size()));
    double mx = 0.0;
    for (double r : radii) mx = std::max(mx, r);
    for (std::size_t i = 0; i < radii.size(); ++i)
        x(static_cast<Eigen::Index>(i)) = mx > 0.0 ? radii[i] / mx : 0.0;
    return x;
}

double forward_normalized(const NetworkModel& model, const RealVector& x) {
    if (x.size() != model.input_dim)
        throw ArgumentError("forward: expected " + std::to_string(model.input_dim) + " inputs, got " +
                            std::to_string(x.size()));
    RealVector z = model.W1 * x + model.b1;
    double q = model.b2;
    for (Eigen::Index i = 0; i < z.size(); ++i) q += model.w2(i) * sigmoid(z(i));
    return q;
}

double forward(const NetworkModel& model, std::span<const double> radii) {
    return forward_normalized(model, normalize_radii(radii));
}

double forward(const NetworkModel& model, const RadiiVector& radii) { return forward(model, radii.R); }

RealMatrix output_jacobian(const NetworkModel& model, const RealMatrix& inputs) {
    if (inputs.cols() != model.input_dim) throw ArgumentError("output_jacobian: input width mismatch");
    return jacobian_rows(model, inputs);
}

void TrainingSet::add(std::span<const double> radii, double target) {
    const RealVector x = normalize_radii(radii);
    add_normalized(std::span<const double>(x.data(), static_cast<std::size_t>(x.size())), target);
}

void TrainingSet::add_normalized(std::span<const double> x, double target) {
    if (input_dim == 0) input_dim = static_cast<int>(x.size());
    if (static_cast<int>(x.size()) != input_dim) throw ArgumentError("TrainingSet: row width mismatch");
    inputs.insert(inputs.end(), x.begin(), x.end());
    targets.push_back(target);
}

RealMatrix TrainingSet::input_matrix() const {
    return Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
        inputs.data(), static_cast<Eigen::Index>(targets.size()), input_dim);
}

RealVector TrainingSet::target_vector() const {
    return Eigen::Map<const RealVector>(targets.data(), static_cast<Eigen::Index>(targets.size()));
}

LmOutcome levenberg_marquardt(const LmProblem& problem, RealVector theta, int max_epochs, double tol,
                              double lambda_init, double lambda_max) {
    LmOutcome out;
    RealVector e = problem.residuals(theta);
    if (!e.allFinite()) throw TrainingError("levenberg_marquardt: non-finite residuals at the initial point");
    double loss = 0.5 * e.squaredNorm();
    double lambda = lambda_init;
    const Eigen::Index p = theta.size();
    RealMatrix jtj(p, p);
    RealVector jte(p);
    out.stop_reason = "max_epochs";
    int epoch = 0;
    for (; epoch < max_epochs; ++epoch) {
        problem.normal(theta, jtj, jte);
        const double grad = jte.norm();
        if (!std::isfinite(grad)) throw TrainingError("levenberg_marquardt: non-finite gradient");
        if (grad < tol) {
            out.stop_reason = "gradient";
            break;
        }
        bool accepted = false;
        while (!accepted) {
            RealMatrix a = jtj;
            a.diagonal().array() += lambda;
            const Eigen::LDLT<RealMatrix> ldlt(a);
            const RealVector step = -ldlt.solve(jte);
            if (ldlt.info() == Eigen::Success && step.allFinite()) {
                const RealVector cand = theta + step;
                const RealVector ec = problem.residuals(cand);
                const double lc = ec.allFinite() ? 0.5 * ec.squaredNorm() : std::numeric_limits<double>::infinity();
                if (lc < loss) {
                    theta = cand;
                    e = ec;
                    loss = lc;
                    lambda *= 0.1;
                    accepted = true;
                    break;
                }
            }
            lambda *= 10.0;
            if (lambda > lambda_max) break;
        }
        if (!accepted) {
            out.stop_reason = "lambda";
            break;
        }
        if (problem.on_accept) problem.on_accept(epoch + 1, theta, loss, lambda, grad);
    }
    out.theta = std::move(theta);
    out.loss = loss;
    out.epochs = epoch;
    return out;
}

TrainResult train_lm(const TrainingSet& data, const TrainOptions& options) {
    const std::size_t n = data.size();
    if (n == 0 || data.input_dim <= 0) throw TrainingError("train_lm: empty training set");
    if (options.hidden_dim <= 0) throw ArgumentError("train_lm: hidden_dim must be positive");

    RandomSource rng(options.seed);
    NetworkModel model = NetworkModel::zeros(data.input_dim, options.hidden_dim);
    model.family = data.family;
    {
        const double a1 = 1.0 / std::sqrt(static_cast<double>(data.input_dim));
        const double a2 = 1.0 / std::sqrt(static_cast<double>(options.hidden_dim));
        for (Eigen::Index i = 0; i < model.W1.size(); ++i) model.W1.data()[i] = rng.uniform(-a1, a1);
        for (Eigen::Index i = 0; i < model.b1.size(); ++i) model.b1(i) = rng.uniform(-a1, a1);
        for (Eigen::Index i = 0; i < model.w2.size(); ++i) model.w2(i) = rng.uniform(-a2, a2);
        model.b2 = rng.uniform(-a2, a2);
    }

    // Seeded shuffle, then the first share goes to validation.
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    for (std::size_t i = n; i > 1; --i) std::swap(order[i - 1], order[rng.next() % i]);
    std::size_t n_val = static_cast<std::size_t>(std::floor(options.validation_fraction * static_cast<double>(n)));
    if (n_val >= n) n_val = 0;

    const RealMatrix all_x = data.input_matrix();
    const RealVector all_y = data.target_vector();
    auto gather = [&](std::size_t from, std::size_t to, RealMatrix& x, RealVector& y) {
        x.resize(static_cast<Eigen::Index>(to - from), data.input_dim);
        y.resize(static_cast<Eigen::Index>(to - from));
        for (std::size_t i = from; i < to; ++i) {
            x.row(static_cast<Eigen::Index>(i - from)) = all_x.row(static_cast<Eigen::Index>(order[i]));
            y(static_cast<Eigen::Index>(i - from)) = all_y(static_cast<Eigen::Index>(order[i]));
        }
    };
    RealMatrix xt, xv;
    RealVector yt, yv;
    gather(n_val, n, xt, yt);
    gather(0, n_val, xv, yv);
    if (n_val == 0) {
        xv = xt;
        yv = yt;
    }

    NetworkModel work = model;
    auto mse = [&](const RealMatrix& x, const RealVector& y) {
        return (predict(work, x) - y).squaredNorm() / static_cast<double>(y.size());
    };

    LmProblem problem;
    problem.residuals = [&](const RealVector& theta) {
        work.set_parameters(theta);
        return RealVector(predict(work, xt) - yt);
    };
    problem.normal = [&](const RealVector& theta, RealMatrix& jtj, RealVector& jte) {
        work.set_parameters(theta);
        jtj.setZero();
        jte.setZero();
        for (Eigen::Index r0 = 0; r0 < xt.rows(); r0 += kChunk) {
            const Eigen::Index cnt = std::min(kChunk, xt.rows() - r0);
            const RealMatrix xc = xt.middleRows(r0, cnt);
            const RealMatrix jc = jacobian_rows(work, xc);
            const RealVector ec = predict(work, xc) - yt.segment(r0, cnt);
            jtj.selfadjointView<Eigen::Lower>().rankUpdate(jc.transpose());
            jte.noalias() += jc.transpose() * ec;
        }
        jtj = RealMatrix(jtj.selfadjointView<Eigen::Lower>());
    };

    TrainResult result;
    work = model;
    result.model = model;
    result.best_val_loss = mse(xv, yv);
    if (!std::isfinite(result.best_val_loss)) throw TrainingError("train_lm: non-finite initial validation error");
    problem.on_accept = [&](int epoch, const RealVector& theta, double loss, double lambda, double grad) {
        work.set_parameters(theta);
        EpochRecord rec;
        rec.epoch = epoch;
        rec.loss = 2.0 * loss / static_cast<double>(yt.size());
        rec.val_loss = mse(xv, yv);
        rec.lambda = lambda;
        rec.grad_norm = grad;
        result.history.push_back(rec);
        if (rec.val_loss < result.best_val_loss) {
            result.best_val_loss = rec.val_loss;
            result.model = work;
        }
    };

    try {
        const LmOutcome lm = levenberg_marquardt(problem, model.parameters(), options.max_epochs, options.tol,
                                                 options.lambda_init, options.lambda_max);
        result.stop_reason = lm.stop_reason;
    } catch (const TrainingError& err) {
        std::ostringstream msg;
        msg << err.what() << " (family " << name(data.family) << ", " << n << " samples, "
            << result.history.size() << " accepted epochs)";
        throw TrainingError(msg.str());
    }
    return result;
}

std::string model_to_json(const NetworkModel& m) {
    nlohmann::ordered_json j;
    j["format"] = kFormat;
    j["version"] = kVersion;
    j["family"] = std::string(name(m.family));
    j["normalization"] = "max-radius";
    j["input_dim"] = m.input_dim;
    j["hidden_dim"] = m.hidden_dim;
    j["W1"] = to_vector(m.W1);
    j["b1"] = std::vector<double>(m.b1.data(), m.b1.data() + m.b1.size());
    j["w2"] = std::vector<double>(m.w2.data(), m.w2.data() + m.w2.size());
    j["b2"] = m.b2;
    return j.dump(1) + "\n";
}

NetworkModel model_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ModelLoadError(std::string("model file is not valid JSON: ") + e.what());
    }
    try {
        if (j.at("format").get<std::string>() != kFormat) throw ModelLoadError("not a mimoid network model");
        const int version = j.at("version").get<int>();
        if (version != kVersion)
            throw ModelLoadError("model format version " + std::to_string(version) + " is not supported");
        if (j.at("normalization").get<std::string>() != "max-radius")
            throw ModelLoadError("unsupported input normalization");
        const int in = j.at("input_dim").get<int>();
        const int hid = j.at("hidden_dim").get<int>();
        if (in <= 0 || hid <= 0) throw ModelLoadError("model dimensions must be positive");
        NetworkModel m = NetworkModel::zeros(in, hid);
        m.family = parse_family(j.at("family").get<std::string>());
        const auto w1 = j.at("W1").get<std::vector<double>>();
        const auto b1 = j.at("b1").get<std::vector<double>>();
        const auto w2 = j.at("w2").get<std::vector<double>>();
        if (w1.size() != static_cast<std::size_t>(in * hid) || b1.size() != static_cast<std::size_t>(hid) ||
            w2.size() != static_cast<std::size_t>(hid))
            throw ModelLoadError("model weight arrays do not match the declared dimensions");
        for (int i = 0; i < hid; ++i)
            for (int c = 0; c < in; ++c) m.W1(i, c) = w1[static_cast<std::size_t>(i * in + c)];
        m.b1 = Eigen::Map<const RealVector>(b1.data(), hid);
        m.w2 = Eigen::Map<const RealVector>(w2.data(), hid);
        m.b2 = j.at("b2").get<double>();
        return m;
    } catch (const nlohmann::json::exception& e) {
        throw ModelLoadError(std::string("malformed model file: ") + e.what());
    }
}

void save_model(const NetworkModel& model, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    out << model_to_json(model);
    if (!out) throw std::runtime_error("failed writing " + path.string());
}

NetworkModel load_model(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ModelLoadError("cannot open model file " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return model_from_json(ss.str());
}

}  // namespace mimoid
