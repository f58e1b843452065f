// Command-line front end: one subcommand per protocol plus the capacity
// sweep. Sweeps emit CSV, single runs emit JSON report objects; everything
// is deterministic for a fixed --seed.

#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "qchan/qchan.hpp"

namespace {

using qchan::ordered_json;

std::vector<int> parse_bits(const std::string& text, int m) {
  if (static_cast<int>(text.size()) != m) {
    throw std::invalid_argument("bits length must equal m");
  }
  std::vector<int> bits;
  bits.reserve(text.size());
  for (char c : text) {
    if (c != '0' && c != '1') throw std::invalid_argument("bits must be a string of 0s and 1s");
    bits.push_back(c - '0');
  }
  return bits;
}

void write_output(const std::string& path, const std::string& payload) {
  if (path.empty()) {
    std::cout << payload;
    if (!std::cout) throw std::runtime_error("failed to write to standard output");
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw std::runtime_error("failed to open output file: " + path);
  file << payload;
  if (!file) throw std::runtime_error("failed to write output file: " + path);
}

struct SwapOptions {
  int m = 1;
  std::string bits;
  std::string mode = "entangled";
  double dt = 1.0;
  double hbar = 1.0;
  int time_samples = 101;
  std::optional<double> power_budget;
  std::uint64_t seed = 0;
  std::string output;
};

std::string run_swap(const SwapOptions& opt) {
  const std::vector<int> bits = parse_bits(opt.bits, opt.m);
  qchan::ChannelConfig cfg{opt.m, opt.dt, opt.hbar, opt.power_budget};
  const qchan::TransferReport report =
      opt.mode == "entangled" ? qchan::run_entangled_transfer(bits, cfg, opt.time_samples)
                              : qchan::run_unentangled_transfer(bits, cfg);
  ordered_json config{{"m", opt.m},          {"dt", opt.dt},
                      {"hbar", opt.hbar},    {"bits", opt.bits},
                      {"mode", opt.mode},    {"time_samples", opt.time_samples},
                      {"seed", opt.seed}};
  if (opt.power_budget) {
    config["power_budget"] = *opt.power_budget;
  }
  std::ostringstream out;
  qchan::emit_report_json(qchan::report_envelope("swap", config, qchan::to_json(report)), out);
  return out.str();
}

struct CapacityOptions {
  std::vector<double> powers;
  double power_min = 0.1;
  double power_max = 10.0;
  int power_points = 21;
  int m_max = 8;
  double hbar = 1.0;
  std::uint64_t seed = 0;
  std::string output;
};

std::string run_capacity(const CapacityOptions& opt) {
  std::vector<double> grid = opt.powers;
  if (grid.empty()) {
    if (opt.power_points < 2) throw std::invalid_argument("--power-points must be >= 2");
    if (!(opt.power_min > 0.0) || !(opt.power_max > opt.power_min)) {
      throw std::invalid_argument("--power-min/--power-max must satisfy 0 < min < max");
    }
    for (int k = 0; k < opt.power_points; ++k) {
      const double f = static_cast<double>(k) / (opt.power_points - 1);
      grid.push_back(opt.power_min * std::pow(opt.power_max / opt.power_min, f));
    }
  }
  if (opt.m_max < 1) throw std::invalid_argument("--m-max must be >= 1");
  std::vector<int> m_values;
  for (int m = 1; m <= opt.m_max; ++m) m_values.push_back(m);
  const auto points = qchan::figure1_sweep(grid, m_values, opt.hbar);
  std::ostringstream out;
  qchan::emit_capacity_csv(points, out);
  return out.str();
}

struct ChainOptions {
  int sites = 3;
  int bit = 1;
  double dt = 1.0;
  double hbar = 1.0;
  std::uint64_t seed = 0;
  std::string output;
};

std::string run_chain(const ChainOptions& opt) {
  qchan::ChannelConfig cfg{1, opt.dt, opt.hbar, std::nullopt};
  const qchan::ChainReport report = qchan::run_chain_relay(opt.bit, opt.sites, cfg);
  ordered_json config{{"sites", opt.sites},
                      {"bit", opt.bit},
                      {"dt", opt.dt},
                      {"hbar", opt.hbar},
                      {"seed", opt.seed}};
  std::ostringstream out;
  qchan::emit_report_json(qchan::report_envelope("chain", config, qchan::to_json(report)), out);
  return out.str();
}

struct SpinWaveOptions {
  int sites = 4;
  int bit = 1;
  double dt = 1.0;
  double hbar = 1.0;
  double t_max = 0.0;  // 0 means 2 * sites * dt
  int grid = 201;
  std::uint64_t seed = 0;
  std::string output;
};

std::string run_spinwave(const SpinWaveOptions& opt) {
  const double t_max = opt.t_max > 0.0 ? opt.t_max : 2.0 * opt.sites * opt.dt;
  qchan::ChannelConfig cfg{1, opt.dt, opt.hbar, std::nullopt};
  const qchan::SpinWaveCurve curve = qchan::run_spin_wave(opt.bit, opt.sites, cfg, t_max, opt.grid);
  ordered_json config{{"sites", opt.sites}, {"bit", opt.bit},   {"dt", opt.dt},
                      {"hbar", opt.hbar},   {"t_max", t_max},   {"grid", opt.grid},
                      {"seed", opt.seed}};
  std::ostringstream out;
  qchan::emit_report_json(qchan::report_envelope("spinwave", config, qchan::to_json(curve)),
                          out);
  return out.str();
}

struct DecohereOptions {
  int m = 1;
  std::string bits = "1";
  double p = 1.0;
  std::int64_t trials = 100000;
  double dt = 1.0;
  double hbar = 1.0;
  std::uint64_t seed = 0;
  std::string output;
};

std::string run_decohere(const DecohereOptions& opt) {
  const std::vector<int> bits = parse_bits(opt.bits, opt.m);
  qchan::ChannelConfig cfg{opt.m, opt.dt, opt.hbar, std::nullopt};
  const qchan::DecoherenceReport report =
      qchan::run_decoherence_trials(bits, cfg, opt.p, opt.trials, opt.seed);
  ordered_json config{{"m", opt.m},       {"bits", opt.bits},   {"p", opt.p},
                      {"trials", opt.trials}, {"dt", opt.dt},   {"hbar", opt.hbar},
                      {"seed", opt.seed}};
  std::ostringstream out;
  qchan::emit_report_json(qchan::report_envelope("decohere", config, qchan::to_json(report)),
                          out);
  return out.str();
}

struct MlCheckOptions {
  int m = 1;
  std::string bits;  // empty means all ones
  double dt = 1.0;
  double hbar = 1.0;
  double t_max_factor = 2.0;
  int grid = 2001;
  int random_count = 0;
  int random_dim = 8;
  std::uint64_t seed = 0;
  std::string output;
};

Eigen::MatrixXcd random_hermitian(int dim, std::uint64_t seed) {
  std::mt19937_64 engine(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::MatrixXcd g(dim, dim);
  for (int r = 0; r < dim; ++r) {
    for (int c = 0; c < dim; ++c) {
      g(r, c) = std::complex<double>(gauss(engine), gauss(engine));
    }
  }
  return 0.5 * (g + g.adjoint().eval());
}

std::string run_mlcheck(const MlCheckOptions& opt) {
  if (opt.m < 1 || opt.m > 5) {
    throw std::invalid_argument("--m must be in [1, 5] (dense-matrix check)");
  }
  if (opt.random_dim != 2 && opt.random_dim != 4 && opt.random_dim != 8) {
    throw std::invalid_argument("--dim must be one of 2, 4, 8");
  }
  if (!(opt.t_max_factor > 1.0)) throw std::invalid_argument("--t-max-factor must be > 1");
  const std::string bits_text =
      opt.bits.empty() ? std::string(static_cast<std::size_t>(opt.m), '1') : opt.bits;
  const std::vector<int> bits = parse_bits(bits_text, opt.m);
  if (std::all_of(bits.begin(), bits.end(), [](int b) { return b == 0; })) {
    throw std::invalid_argument("mlcheck needs a message with at least one 1 bit");
  }

  std::vector<int> joint(bits);
  joint.insert(joint.end(), static_cast<std::size_t>(opt.m), 0);
  const qchan::PureState psi = qchan::basis_state(joint);
  const qchan::SwapHamiltonian swap_h(qchan::BlockSwap(qchan::RegisterLayout::contiguous(opt.m)),
                                      opt.dt, opt.hbar);
  const qchan::DenseHamiltonian dense = qchan::dense_matrix_of(swap_h);
  const double mean_energy = qchan::expectation_energy(psi, dense);
  const double bound = qchan::ml_bound(mean_energy, 0.0, opt.hbar);
  const auto tau = qchan::orthogonality_time(psi, dense, opt.hbar, opt.t_max_factor * bound,
                                             opt.grid);

  ordered_json results;
  results["mean_energy"] = mean_energy;
  results["ground_energy"] = 0.0;
  results["ml_bound"] = bound;
  results["orthogonality_time"] = tau ? ordered_json(*tau) : ordered_json(nullptr);
  results["saturation_ratio"] = tau ? ordered_json(*tau / bound) : ordered_json(nullptr);

  int detected = 0;
  int violations = 0;
  std::optional<double> min_margin;
  for (int i = 0; i < opt.random_count; ++i) {
    const qchan::DenseHamiltonian h(
        random_hermitian(opt.random_dim, qchan::derive_seed(opt.seed, static_cast<std::uint64_t>(i))));
    const qchan::SpectralDecomposition spectral(h);
    // Equal superposition of the extreme eigenvectors: the survival curve is
    // an exact half-gap cosine, so orthogonality is always reached.
    Eigen::VectorXcd amps =
        (spectral.eigenvectors.col(0) + spectral.eigenvectors.col(opt.random_dim - 1)) /
        std::sqrt(2.0);
    const qchan::PureState state{std::move(amps)};
    const double energy = qchan::expectation_energy(state, h);
    const double b = qchan::ml_bound(energy, spectral.ground_energy(), opt.hbar);
    const auto t = qchan::orthogonality_time(state, h, opt.hbar, 2.5 * b, opt.grid);
    if (!t) continue;
    ++detected;
    const double margin = (*t - b) / b;
    if (*t < b - 1e-6 * (*t)) ++violations;
    if (!min_margin || margin < *min_margin) min_margin = margin;
  }
  ordered_json random_checks;
  random_checks["count"] = opt.random_count;
  random_checks["detected"] = detected;
  random_checks["violations"] = violations;
  random_checks["min_relative_margin"] =
      min_margin ? ordered_json(*min_margin) : ordered_json(nullptr);
  results["random_checks"] = random_checks;

  ordered_json config{{"m", opt.m},
                      {"bits", bits_text},
                      {"dt", opt.dt},
                      {"hbar", opt.hbar},
                      {"t_max_factor", opt.t_max_factor},
                      {"grid", opt.grid},
                      {"random", opt.random_count},
                      {"dim", opt.random_dim},
                      {"seed", opt.seed}};
  std::ostringstream out;
  qchan::emit_report_json(qchan::report_envelope("mlcheck", config, results), out);
  return out.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qchan: power-limited qubit channel simulator"};
  app.require_subcommand(1);

  SwapOptions swap_opt;
  CLI::App* swap = app.add_subcommand("swap", "Simulate one block-swap transfer of m bits");
  swap->add_option("--m", swap_opt.m, "qubits per side (count)")->check(CLI::Range(1, 7));
  swap->add_option("--bits", swap_opt.bits, "message bits, e.g. 10 (length m)")->required();
  swap->add_option("--mode", swap_opt.mode, "entangled | unentangled")
      ->check(CLI::IsMember({"entangled", "unentangled"}));
  swap->add_option("--dt", swap_opt.dt, "transfer window (time units)");
  swap->add_option("--hbar", swap_opt.hbar, "action constant (energy*time)");
  swap->add_option("--time-samples", swap_opt.time_samples,
                   "energy samples across the window (odd count)");
  double budget = 0.0;
  CLI::Option* budget_opt =
      swap->add_option("--power", budget, "power budget to record (energy/time)");
  swap->add_option("--seed", swap_opt.seed, "seed echoed into the report");
  swap->add_option("--output", swap_opt.output, "output path (default: stdout)");

  CapacityOptions cap_opt;
  CLI::App* capacity =
      app.add_subcommand("capacity", "Emit the capacity-vs-power sweep as CSV");
  capacity->add_option("--power", cap_opt.powers,
                       "explicit power values (energy/time); overrides the grid");
  capacity->add_option("--power-min", cap_opt.power_min, "grid start (energy/time)");
  capacity->add_option("--power-max", cap_opt.power_max, "grid end (energy/time)");
  capacity->add_option("--power-points", cap_opt.power_points, "log-spaced grid size");
  capacity->add_option("--m-max", cap_opt.m_max, "emit channel counts 1..m-max");
  capacity->add_option("--hbar", cap_opt.hbar, "action constant (energy*time)");
  capacity->add_option("--seed", cap_opt.seed, "accepted for uniformity; sweep is closed-form");
  capacity->add_option("--output", cap_opt.output, "output path (default: stdout)");

  ChainOptions chain_opt;
  CLI::App* chain = app.add_subcommand("chain", "Relay one bit down a 2n-qubit swap chain");
  chain->add_option("--sites", chain_opt.sites, "relay sites n (chain has 2n qubits)")
      ->check(CLI::Range(1, 7));
  chain->add_option("--bit", chain_opt.bit, "message bit (0 or 1)")->check(CLI::Range(0, 1));
  chain->add_option("--dt", chain_opt.dt, "base transfer window (time units)");
  chain->add_option("--hbar", chain_opt.hbar, "action constant (energy*time)");
  chain->add_option("--seed", chain_opt.seed, "seed echoed into the report");
  chain->add_option("--output", chain_opt.output, "output path (default: stdout)");

  SpinWaveOptions wave_opt;
  CLI::App* spinwave =
      app.add_subcommand("spinwave", "Propagate a bit under an always-on swap chain");
  spinwave->add_option("--sites", wave_opt.sites, "chain sites")->check(CLI::Range(2, 10));
  spinwave->add_option("--bit", wave_opt.bit, "message bit (0 or 1)")->check(CLI::Range(0, 1));
  spinwave->add_option("--dt", wave_opt.dt, "window setting the coupling pi*hbar/(2 dt)");
  spinwave->add_option("--hbar", wave_opt.hbar, "action constant (energy*time)");
  spinwave->add_option("--t-max", wave_opt.t_max, "curve end time (default 2*sites*dt)");
  spinwave->add_option("--grid", wave_opt.grid, "number of curve samples");
  spinwave->add_option("--seed", wave_opt.seed, "seed echoed into the report");
  spinwave->add_option("--output", wave_opt.output, "output path (default: stdout)");

  DecohereOptions dec_opt;
  CLI::App* decohere = app.add_subcommand(
      "decohere", "Repeat-until-success transfer with midpoint dephasing trials");
  decohere->add_option("--m", dec_opt.m, "qubits per side (count)")->check(CLI::Range(1, 5));
  decohere->add_option("--bits", dec_opt.bits, "message bits, not all zero (length m)")
      ->required();
  decohere->add_option("--p", dec_opt.p, "dephasing probability per attempt, in [0, 1]");
  decohere->add_option("--trials", dec_opt.trials, "independent trials");
  decohere->add_option("--dt", dec_opt.dt, "transfer window (time units)");
  decohere->add_option("--hbar", dec_opt.hbar, "action constant (energy*time)");
  decohere->add_option("--seed", dec_opt.seed, "trial RNG seed");
  decohere->add_option("--output", dec_opt.output, "output path (default: stdout)");

  MlCheckOptions ml_opt;
  CLI::App* mlcheck = app.add_subcommand(
      "mlcheck", "Orthogonality time vs the minimum-time bound pi*hbar/2E");
  mlcheck->add_option("--m", ml_opt.m, "qubits per side for the swap check")
      ->check(CLI::Range(1, 5));
  mlcheck->add_option("--bits", ml_opt.bits, "message bits (default: all ones)");
  mlcheck->add_option("--dt", ml_opt.dt, "transfer window (time units)");
  mlcheck->add_option("--hbar", ml_opt.hbar, "action constant (energy*time)");
  mlcheck->add_option("--t-max-factor", ml_opt.t_max_factor,
                      "scan horizon as a multiple of the bound");
  mlcheck->add_option("--grid", ml_opt.grid, "survival-curve scan points (>= 100)");
  mlcheck->add_option("--random", ml_opt.random_count,
                      "additionally check this many random Hermitian generators");
  mlcheck->add_option("--dim", ml_opt.random_dim, "dimension of the random generators (2/4/8)");
  mlcheck->add_option("--seed", ml_opt.seed, "seed for the random generators");
  mlcheck->add_option("--output", ml_opt.output, "output path (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }

  try {
    if (budget_opt->count() > 0) swap_opt.power_budget = budget;
    std::string payload;
    std::string output;
    if (swap->parsed()) {
      payload = run_swap(swap_opt);
      output = swap_opt.output;
    } else if (capacity->parsed()) {
      payload = run_capacity(cap_opt);
      output = cap_opt.output;
    } else if (chain->parsed()) {
      payload = run_chain(chain_opt);
      output = chain_opt.output;
    } else if (spinwave->parsed()) {
      payload = run_spinwave(wave_opt);
      output = wave_opt.output;
    } else if (decohere->parsed()) {
      payload = run_decohere(dec_opt);
      output = dec_opt.output;
    } else if (mlcheck->parsed()) {
      payload = run_mlcheck(ml_opt);
      output = ml_opt.output;
    }
    write_output(output, payload);
    return 0;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
