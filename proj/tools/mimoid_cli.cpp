// mimoid: command-line front end for blind MIMO scheme identification.

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mimoid/classifier.hpp"
#include "mimoid/config.hpp"
#include "mimoid/harness.hpp"
#include "mimoid/io.hpp"
#include "mimoid/schemes.hpp"

namespace {

using namespace mimoid;

constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

struct CommonFlags {
    std::string config;
    std::string snr;
    std::optional<int> n_r;
    std::optional<int> samples;
    std::optional<int> detectors;
    std::optional<std::uint64_t> seed;
    std::optional<int> trials;
    std::string system;
    std::string model_dir;
    std::string modulation;
    std::optional<int> threads;
    std::string out;
};

void add_common(CLI::App* app, CommonFlags& f) {
    app->add_option("--config", f.config, "JSON config file");
    app->add_option("--snr", f.snr, "SNR in dB, or a comma-separated grid");
    app->add_option("--nr", f.n_r, "receive antennas N_r");
    app->add_option("--samples", f.samples, "processed samples L (single-carrier)");
    app->add_option("--nd", f.detectors, "OFDM detectors N_d");
    app->add_option("--seed", f.seed, "master seed");
    app->add_option("--trials", f.trials, "trials per scheme per point");
    app->add_option("--system", f.system, "single-carrier | stbc-ofdm | sfbc-ofdm");
    app->add_option("--model-dir", f.model_dir, "directory of trained models");
    app->add_option("--modulation", f.modulation, "e.g. 4PSK, 16QAM");
    app->add_option("--threads", f.threads, "worker threads (0 = all cores)");
    app->add_option("--out", f.out, "output path (default stdout)");
}

std::vector<double> parse_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t pos = 0;
        double v = 0.0;
        try {
            v = std::stod(item, &pos);
        } catch (const std::exception&) {
            pos = 0;
        }
        if (pos == 0 || pos != item.size()) throw ConfigError("'" + item + "' is not a number");
        out.push_back(v);
    }
    if (out.empty()) throw ConfigError("empty number list");
    return out;
}

std::vector<std::string> split(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(item);
    return out;
}

ExperimentConfig resolve(const CommonFlags& f) {
    ExperimentConfig c = f.config.empty() ? ExperimentConfig{} : load_config(f.config);
    try {
        if (!f.system.empty()) c.system = parse_system(f.system);
        if (!f.modulation.empty()) c.modulation = ModulationSpec::parse(f.modulation);
    } catch (const ArgumentError& e) {
        throw ConfigError(e.what());
    }
    if (!f.snr.empty()) c.snr_db = parse_list(f.snr);
    if (f.n_r) c.n_r = *f.n_r;
    if (f.samples) c.samples = *f.samples;
    if (f.detectors) c.detectors = *f.detectors;
    if (f.seed) c.seed = *f.seed;
    if (f.trials) c.trials = *f.trials;
    if (!f.model_dir.empty()) c.model_dir = f.model_dir;
    if (f.threads) c.threads = *f.threads;
    c.validate();
    return c;
}

// Writes to --out or stdout.
class Output {
public:
    explicit Output(const std::string& path) {
        if (!path.empty()) {
            file_.open(path, std::ios::binary);
            if (!file_) throw std::runtime_error("cannot open " + path + " for writing");
        }
    }
    std::ostream& stream() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

private:
    std::ofstream file_;
};

void log_stderr(const std::string& msg) { std::cerr << msg << '\n'; }

SchemeId scheme_arg(const std::string& text) {
    const auto id = parse_scheme(text);
    if (!id) throw ConfigError("unknown scheme '" + text + "'");
    return *id;
}

int cmd_schemes_list(const CommonFlags& f) {
    Output out(f.out);
    auto& os = out.stream();
    os << "index,name,n_t,T,N_s,rate,alpha,beta1,beta2,beta3,gamma1,gamma2\n";
    for (const auto& d : scheme_registry()) {
        os << index_of(d.id) << ',' << d.name << ',' << d.n_t << ',' << d.block_len << ',' << d.symbols_per_block
           << ',' << d.rate_num << '/' << d.rate_den << ',' << d.signature.alpha;
        for (int b : d.signature.beta) os << ',' << b;
        for (int g : d.signature.gamma) os << ',' << g;
        os << '\n';
    }
    return 0;
}

int cmd_gen(const CommonFlags& f, const std::string& scheme, bool received) {
    const ExperimentConfig c = resolve(f);
    if (f.out.empty()) throw ConfigError("gen needs --out");
    const SchemeId id = scheme_arg(scheme);
    RandomSource rng = trial_rng(c.seed, id, 0);
    TxFrame frame;
    frame.variant = c.system;
    frame.ofdm = c.ofdm;
    if (!received) {
        frame = c.system == SystemVariant::SingleCarrier
                    ? TxFrame{c.system, transmit_single_carrier(id, c.samples, c.modulation, rng), c.ofdm}
                    : transmit_ofdm(c.system, id, c.ofdm, c.modulation, rng);
    } else {
        const int n_t = descriptor(id).n_t;
        const double snr = c.snr_db.front();
        if (c.system == SystemVariant::SingleCarrier) {
            const FlatChannel h = FlatChannel::random(c.n_r, n_t, rng);
            frame.samples = apply_flat(h, transmit_single_carrier(id, c.samples, c.modulation, rng), c.impairments,
                                       snr, rng);
        } else {
            // Received OFDM files hold time-domain samples; classify demodulates them.
            const SelectiveChannel h = SelectiveChannel::random(c.n_r, n_t, rng, c.taps);
            const TxFrame tx = transmit_ofdm(c.system, id, c.ofdm, c.modulation, rng);
            frame.samples = apply_selective(h, tx, c.impairments, snr, rng);
        }
    }
    write_frame(f.out, frame);
    std::cerr << "wrote " << frame.samples.rows() << " x " << frame.samples.cols() << " samples to " << f.out
              << '\n';
    return 0;
}

int cmd_features(const CommonFlags& f, const std::string& scheme) {
    const ExperimentConfig c = resolve(f);
    const SchemeId id = scheme_arg(scheme);
    RandomSource rng = trial_rng(c.seed, id, 0);
    const RadiiSet radii = extract_radii(c, simulate(c, id, c.snr_db.front(), rng));
    Output out(f.out);
    auto& os = out.stream();
    os << "kind,i,mu,r,R\n";
    for (const auto& rv : radii)
        for (std::size_t i = 0; i < rv.size(); ++i)
            os << name(rv.kind) << ',' << i + 1 << ',' << format_double(rv.mu[i]) << ',' << format_double(rv.r[i])
               << ',' << format_double(rv.R[i]) << '\n';
    return 0;
}

int cmd_train(const CommonFlags& f, bool keep_data) {
    const ExperimentConfig c = resolve(f);
    const auto sets = gen_training(c, log_stderr);
    const std::filesystem::path dir = c.model_dir;
    std::filesystem::create_directories(dir);
    if (keep_data) {
        for (const auto& s : sets) {
            std::ofstream csv(dir / (std::string(name(c.system)) + "-nr" + std::to_string(c.n_r) + "-" +
                                     std::string(name(s.family)) + "-training.csv"),
                              std::ios::binary);
            write_training_csv(csv, s);
        }
    }
    const auto trained = train_models(sets, c.training, c.seed, log_stderr);
    save_models(dir, c.system, c.n_r, trained.models);
    Output out(f.out.empty() ? (dir / (std::string(name(c.system)) + "-nr" + std::to_string(c.n_r) +
                                       "-training-report.csv"))
                                   .string()
                             : f.out);
    auto& os = out.stream();
    os << "# config " << config_to_json(c) << '\n';
    os << "family,epoch,loss,val_loss,lambda,grad_norm\n";
    for (const auto& rep : trained.reports)
        for (const auto& e : rep.history)
            os << name(rep.model.family) << ',' << e.epoch << ',' << format_double(e.loss) << ','
               << format_double(e.val_loss) << ',' << format_double(e.lambda) << ',' << format_double(e.grad_norm)
               << '\n';
    std::cerr << "models written to " << dir.string() << " (hash " << hex64(trained.models.hash()) << ")\n";
    return 0;
}

void print_ranking(std::ostream& os, const Decision& d, const FeatureVector& fv) {
    os << "# features";
    for (double v : fv.as_array()) os << ' ' << format_double(v);
    os << '\n';
    os << "rank,scheme,n_t,distance\n";
    for (std::size_t i = 0; i < d.ranking.size(); ++i)
        os << i + 1 << ',' << name(d.ranking[i].first) << ',' << descriptor(d.ranking[i].first).n_t << ','
           << format_double(d.ranking[i].second) << '\n';
}

int cmd_classify(const CommonFlags& f, const std::string& input, const std::string& scheme) {
    ExperimentConfig c = resolve(f);
    RadiiSet radii;
    if (!input.empty()) {
        const TxFrame frame = read_frame(input);
        c.system = frame.variant;
        c.n_r = static_cast<int>(frame.samples.rows());
        if (frame.variant == SystemVariant::SingleCarrier) {
            radii = radii_single_carrier(frame.samples);
        } else {
            c.ofdm = frame.ofdm;
            radii = radii_ofdm(ofdm_demodulate(frame.samples, frame.ofdm), frame.variant, c.detectors);
        }
    } else if (!scheme.empty()) {
        const SchemeId id = scheme_arg(scheme);
        RandomSource rng = trial_rng(c.seed, id, 0);
        radii = extract_radii(c, simulate(c, id, c.snr_db.front(), rng));
    } else {
        throw ConfigError("classify needs --input FILE or --scheme NAME");
    }
    const ModelSet models = load_models(c.model_dir, c.system, c.n_r);
    const FeatureVector fv = estimate_features(models, radii);
    Output out(f.out);
    print_ranking(out.stream(), decide(fv), fv);
    return 0;
}

int cmd_sweep(const CommonFlags& f, const std::string& var, const std::string& values) {
    const ExperimentConfig c = resolve(f);
    const SweepVariable v = parse_sweep_variable(var);
    std::vector<std::string> vals;
    if (v == SweepVariable::Snr) {
        for (double s : c.snr_db) vals.push_back(format_double(s));
        if (!values.empty()) vals = split(values);
    } else {
        if (values.empty()) throw ConfigError("sweep over " + var + " needs --values");
        vals = split(values);
    }
    ExperimentConfig base = c;
    if (v == SweepVariable::Snr) base.snr_db = {0.0};  // replaced per value
    ModelStore store(c.model_dir);
    const auto rows = sweep(base, v, vals, store, log_stderr);
    Output out(f.out);
    write_sweep_csv(out.stream(), c, v, rows);
    return 0;
}

int cmd_selftest() {
    int failures = 0;
    auto check = [&](bool ok, const std::string& what) {
        std::cout << (ok ? "ok   " : "FAIL ") << what << '\n';
        if (!ok) ++failures;
    };
    for (auto id : all_schemes())
        check(verify_signature(id, 1.0) == signature(id), "signature " + std::string(name(id)));
    for (auto id : all_schemes()) {
        const Decision d = decide(FeatureVector::from(signature(id)));
        check(d.scheme == id && d.distance == 0.0, "exact decision " + std::string(name(id)));
    }
    const auto pair = min_pairwise_distance();
    check(pair.distance > 0.0, "separability (closest pair " + std::string(name(pair.a)) + "/" +
                                   std::string(name(pair.b)) + ", distance " + format_double(pair.distance) + ")");
    return failures == 0 ? 0 : kExitRuntime;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Blind identification of MIMO transmit-antenna count and coding scheme"};
    app.require_subcommand(1);
    CommonFlags flags;

    auto* schemes = app.add_subcommand("schemes", "scheme registry");
    auto* schemes_list = schemes->add_subcommand("list", "print the 17 schemes and their features");
    schemes->require_subcommand(1);
    schemes_list->add_option("--out", flags.out, "output path");

    std::string scheme = "AL";
    bool received = false;
    auto* gen = app.add_subcommand("gen", "write a transmitted (or received) sample file");
    add_common(gen, flags);
    gen->add_option("--scheme", scheme, "scheme name");
    gen->add_flag("--received", received, "pass through channel and noise at the first --snr");

    auto* features = app.add_subcommand("features", "dump eigenvalues and radii of one simulated trial");
    add_common(features, flags);
    features->add_option("--scheme", scheme, "scheme name");

    bool keep_data = false;
    auto* train = app.add_subcommand("train", "generate training data and fit the three networks");
    add_common(train, flags);
    train->add_flag("--keep-data", keep_data, "also write the training sets as CSV");

    std::string input;
    std::string classify_scheme;
    auto* classify = app.add_subcommand("classify", "classify a sample file or one simulated trial");
    add_common(classify, flags);
    classify->add_option("--input", input, "sample file from `gen --received`");
    classify->add_option("--scheme", classify_scheme, "simulate one trial of this scheme instead");

    std::string var = "snr";
    std::string values;
    auto* sweep_cmd = app.add_subcommand("sweep", "Monte Carlo sweep, CSV output");
    add_common(sweep_cmd, flags);
    sweep_cmd->add_option("--var", var, "snr | L | N_r | N_d | modulation | zeta | delta_f | f_d | epsilon");
    sweep_cmd->add_option("--values", values, "comma-separated values of --var");

    auto* selftest = app.add_subcommand("selftest", "consistency checks of the scheme table and decision rule");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitConfig;
    }

    try {
        if (schemes->parsed() && schemes_list->parsed()) return cmd_schemes_list(flags);
        if (gen->parsed()) return cmd_gen(flags, scheme, received);
        if (features->parsed()) return cmd_features(flags, scheme);
        if (train->parsed()) return cmd_train(flags, keep_data);
        if (classify->parsed()) return cmd_classify(flags, input, classify_scheme);
        if (sweep_cmd->parsed()) return cmd_sweep(flags, var, values);
        if (selftest->parsed()) return cmd_selftest();
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const ArgumentError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
    return kExitConfig;
}
