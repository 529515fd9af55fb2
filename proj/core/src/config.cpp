#include "mcgd/config.hpp"

#include <cmath>
#include <set>

#include "json.hpp"
#include "mcgd/io.hpp"

namespace mcgd {
namespace {

using nlohmann::json;

json parse_object(const std::string& text, const char* what) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string(what) + ": invalid JSON: " + e.what());
  }
  if (!j.is_object()) throw ConfigError(std::string(what) + ": expected a JSON object");
  return j;
}

void check_keys(const json& j, const char* what, std::initializer_list<const char*> allowed) {
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& item : j.items())
    if (!ok.count(item.key()))
      throw ConfigError(std::string(what) + ": unknown key \"" + item.key() + "\"");
}

template <class T>
T get_or(const json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string("bad value for \"") + key + "\"");
  }
}

template <class T>
T require(const json& j, const char* what, const char* key) {
  if (!j.contains(key))
    throw ConfigError(std::string(what) + ": missing required key \"" + key + "\"");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string(what) + ": bad value for \"" + key + "\"");
  }
}

int side_as_int(const json& j, const char* what) {
  const auto side = require<std::int64_t>(j, what, "side");
  if (side < 4) throw ConfigError(std::string(what) + ": side must be >= 4");
  return static_cast<int>(side);
}

std::shared_ptr<const FilterBank> parse_bank(const json& jb, GridShape dims) {
  if (!jb.is_object()) throw ConfigError("bank: expected a JSON object");
  if (jb.contains("file")) {
    check_keys(jb, "bank", {"file"});
    auto bank = std::make_shared<FilterBank>(load_bank(jb.at("file").get<std::string>()));
    if (bank->dims != dims)
      throw ConfigError("bank: file grid does not match the signal grid");
    return bank;
  }
  check_keys(jb, "bank", {"type", "J", "Q"});
  const auto type = require<std::string>(jb, "bank", "type");
  const int Q = get_or<int>(jb, "Q", 1);
  if (type == "morlet2d") {
    if (dims.rank != 2) throw ConfigError("bank: morlet2d needs a two-dimensional grid");
    return std::make_shared<FilterBank>(
        build_morlet_2d(dims.cols, require<int>(jb, "bank", "J"), Q));
  }
  if (type == "gabor1d") {
    if (dims.rank != 1) throw ConfigError("bank: gabor1d needs a one-dimensional grid");
    return std::make_shared<FilterBank>(
        build_gabor_1d(dims.cols, require<int>(jb, "bank", "J"), Q));
  }
  if (type == "shannon") {
    if (Q != 1) throw ConfigError("bank: shannon banks have Q = 1");
    int J = get_or<int>(jb, "J", 0);
    if (J == 0) {
      std::int64_t n = dims.cols;
      while ((std::int64_t{1} << (J + 1)) <= n) ++J;
    }
    return std::make_shared<FilterBank>(build_shannon_bank(dims, J));
  }
  throw ConfigError("bank: unknown type \"" + type + "\"");
}

ComplexField parse_scalar(const json& js, GridShape dims) {
  if (!js.is_object()) throw ConfigError("scalar: expected a JSON object");
  check_keys(js, "scalar", {"kernel", "xi"});
  const auto kernel = require<std::string>(js, "scalar", "kernel");
  if (kernel != "exponential") throw ConfigError("scalar: unknown kernel \"" + kernel + "\"");
  return exponential_kernel_response(dims, get_or<double>(js, "xi", 0.5));
}

std::vector<ScatPair> parse_pairs(const json& jp, const FilterBank& bank) {
  if (!jp.is_object()) throw ConfigError("pairs: expected a JSON object");
  if (jp.contains("list")) {
    check_keys(jp, "pairs", {"list"});
    std::vector<ScatPair> pairs;
    for (const auto& item : jp.at("list")) {
      if (!item.is_array() || item.size() != 4)
        throw ConfigError("pairs: list entries are [j1, q1, j2, q2]");
      pairs.push_back({item[0].get<int>(), item[1].get<int>(), item[2].get<int>(),
                       item[3].get<int>()});
    }
    return pairs;
  }
  check_keys(jp, "pairs", {"policy", "q2_stride"});
  const auto policy = get_or<std::string>(jp, "policy", "increasing");
  if (policy == "increasing")
    return increasing_scale_pairs(bank, get_or<int>(jp, "q2_stride", 1));
  if (policy == "all") {
    if (jp.contains("q2_stride")) throw ConfigError("pairs: q2_stride applies to increasing only");
    return all_scale_pairs(bank);
  }
  throw ConfigError("pairs: unknown policy \"" + policy + "\"");
}

}  // namespace

EnergySpec parse_energy_spec(const std::string& json_text, GridShape dims) {
  dims.validate();
  const json j = parse_object(json_text, "energy");
  check_keys(j, "energy",
             {"family", "bank", "scalar", "pairs", "include_l2x", "include_l1x", "include_mean",
              "include_lowpass", "eps_mod"});

  EnergySpec spec;
  const auto family = require<std::string>(j, "energy", "family");
  if (family == "wavelet-l2")
    spec.family = Family::WaveletL2;
  else if (family == "wavelet-l1")
    spec.family = Family::WaveletL1;
  else if (family == "scattering")
    spec.family = Family::Scattering;
  else if (family == "ising-quadratic")
    spec.family = Family::IsingQuadratic;
  else if (family == "gaussian-scalar")
    spec.family = Family::GaussianScalar;
  else
    throw ConfigError("energy: unknown family \"" + family + "\"");

  spec.include_l2x = get_or<bool>(j, "include_l2x", false);
  spec.include_l1x = get_or<bool>(j, "include_l1x", false);
  spec.include_mean = get_or<bool>(j, "include_mean", false);
  spec.include_lowpass = get_or<bool>(j, "include_lowpass", false);
  spec.eps_mod = get_or<double>(j, "eps_mod", 0.0);
  spec.grid = dims;

  const bool wants_bank = spec.family == Family::WaveletL2 || spec.family == Family::WaveletL1 ||
                          spec.family == Family::Scattering;
  if (wants_bank) {
    if (!j.contains("bank")) throw ConfigError("energy: family \"" + family + "\" needs a bank");
    spec.bank = parse_bank(j.at("bank"), dims);
  } else if (j.contains("bank")) {
    throw ConfigError("energy: family \"" + family + "\" takes no bank");
  }

  if (spec.family == Family::GaussianScalar) {
    if (!j.contains("scalar")) throw ConfigError("energy: gaussian-scalar needs a scalar filter");
    spec.scalar_hat = parse_scalar(j.at("scalar"), dims);
  } else if (j.contains("scalar")) {
    throw ConfigError("energy: only gaussian-scalar takes a scalar filter");
  }

  if (spec.family == Family::Scattering)
    spec.pairs = j.contains("pairs") ? parse_pairs(j.at("pairs"), *spec.bank)
                                     : increasing_scale_pairs(*spec.bank);
  else if (j.contains("pairs"))
    throw ConfigError("energy: only scattering takes pairs");

  spec.validate();
  return spec;
}

DescentConfig parse_descent_config(const std::string& json_text) {
  const json j = parse_object(json_text, "descent");
  check_keys(j, "descent",
             {"max_iters", "eps_abs", "eps_rel", "divergence_factor", "record_trace", "step"});

  DescentConfig cfg;
  cfg.max_iters = get_or<int>(j, "max_iters", cfg.max_iters);
  cfg.eps_abs = get_or<double>(j, "eps_abs", cfg.eps_abs);
  cfg.eps_rel = get_or<double>(j, "eps_rel", cfg.eps_rel);
  cfg.divergence_factor = get_or<double>(j, "divergence_factor", cfg.divergence_factor);
  cfg.record_trace = get_or<bool>(j, "record_trace", cfg.record_trace);
  if (cfg.max_iters < 0) throw ConfigError("descent: max_iters must be >= 0");
  if (cfg.eps_abs < 0 || cfg.eps_rel < 0) throw ConfigError("descent: eps must be >= 0");

  if (j.contains("step")) {
    const json& js = j.at("step");
    if (!js.is_object()) throw ConfigError("step: expected a JSON object");
    check_keys(js, "step",
               {"rule", "kappa0", "decay_tau", "armijo", "shrink", "grow", "kappa_max",
                "max_backtracks"});
    StepRule& s = cfg.step;
    const auto rule = get_or<std::string>(js, "rule", "backtracking");
    if (rule == "constant")
      s.kind = StepRule::Kind::Constant;
    else if (rule == "decay")
      s.kind = StepRule::Kind::Decay;
    else if (rule == "backtracking")
      s.kind = StepRule::Kind::Backtracking;
    else
      throw ConfigError("step: unknown rule \"" + rule + "\"");
    s.kappa0 = get_or<double>(js, "kappa0", s.kappa0);
    s.decay_tau = get_or<double>(js, "decay_tau", s.decay_tau);
    s.armijo = get_or<double>(js, "armijo", s.armijo);
    s.shrink = get_or<double>(js, "shrink", s.shrink);
    s.grow = get_or<double>(js, "grow", s.grow);
    s.kappa_max = get_or<double>(js, "kappa_max", s.kappa_max);
    s.max_backtracks = get_or<int>(js, "max_backtracks", s.max_backtracks);
    if (s.kappa0 <= 0) throw ConfigError("step: kappa0 must be > 0");
    if (s.shrink <= 0 || s.shrink >= 1) throw ConfigError("step: shrink must be in (0, 1)");
    if (s.grow < 1) throw ConfigError("step: grow must be >= 1");
    if (s.decay_tau <= 0) throw ConfigError("step: decay_tau must be > 0");
  }
  return cfg;
}

GridShape GeneratorConfig::dims() const {
  switch (kind) {
    case Kind::GaussianSpectral:
      return spectral.dims;
    case Kind::Ising:
      return GridShape::square(ising.n);
    case Kind::ShotNoise:
      return shot.dims;
  }
  throw ConfigError("invalid generator kind");
}

GeneratorConfig parse_generator_config(const std::string& json_text) {
  const json j = parse_object(json_text, "model");
  const auto model = require<std::string>(j, "model", "model");

  GeneratorConfig gen;
  if (model == "gaussian-spectral") {
    check_keys(j, "model", {"model", "side", "rank", "xi", "kernel"});
    gen.kind = GeneratorConfig::Kind::GaussianSpectral;
    const int side = side_as_int(j, "model");
    const int rank = get_or<int>(j, "rank", 2);
    if (rank != 1 && rank != 2) throw ConfigError("model: rank must be 1 or 2");
    const GridShape dims = rank == 1 ? GridShape::line(side) : GridShape::square(side);
    const double xi = get_or<double>(j, "xi", 0.5);
    const auto kernel = get_or<std::string>(j, "kernel", "lorentzian");
    if (kernel == "lorentzian")
      gen.spectral = lorentzian_kernel_spectrum(dims, xi);
    else if (kernel == "exponential")
      gen.spectral = exponential_kernel_spectrum(dims, xi);
    else
      throw ConfigError("model: unknown kernel \"" + kernel + "\"");
  } else if (model == "ising") {
    check_keys(j, "model",
               {"model", "side", "temperature", "burn_in_sweeps", "thin_sweeps", "algo",
                "fix_sector"});
    gen.kind = GeneratorConfig::Kind::Ising;
    gen.ising.n = side_as_int(j, "model");
    gen.ising.temperature = get_or<double>(j, "temperature", gen.ising.temperature);
    gen.ising.burn_in_sweeps = get_or<int>(j, "burn_in_sweeps", gen.ising.burn_in_sweeps);
    gen.ising.thin_sweeps = get_or<int>(j, "thin_sweeps", gen.ising.thin_sweeps);
    gen.ising.fix_sector = get_or<bool>(j, "fix_sector", gen.ising.fix_sector);
    const auto algo = get_or<std::string>(j, "algo", "auto");
    if (algo == "auto")
      gen.ising.algo = IsingModel::Algo::Auto;
    else if (algo == "metropolis")
      gen.ising.algo = IsingModel::Algo::Metropolis;
    else if (algo == "wolff")
      gen.ising.algo = IsingModel::Algo::Wolff;
    else
      throw ConfigError("model: unknown algo \"" + algo + "\"");
  } else if (model == "cox-shot-noise") {
    check_keys(j, "model", {"model", "side", "mean_rate", "rate_std", "corr_cols", "corr_rows"});
    gen.kind = GeneratorConfig::Kind::ShotNoise;
    gen.shot.dims = GridShape::square(side_as_int(j, "model"));
    gen.shot.mean_rate = get_or<double>(j, "mean_rate", gen.shot.mean_rate);
    gen.shot.rate_std = get_or<double>(j, "rate_std", gen.shot.rate_std);
    gen.shot.corr_cols = get_or<double>(j, "corr_cols", gen.shot.corr_cols);
    gen.shot.corr_rows = get_or<double>(j, "corr_rows", gen.shot.corr_rows);
  } else {
    throw ConfigError("model: unknown model \"" + model + "\"");
  }
  return gen;
}

std::vector<PeriodicSignal> run_generator(const GeneratorConfig& gen, int count,
                                          std::uint64_t seed) {
  if (count < 1) throw ConfigError("sample count must be >= 1");
  switch (gen.kind) {
    case GeneratorConfig::Kind::GaussianSpectral:
      return sample_spectral_gaussian(gen.spectral, count, seed);
    case GeneratorConfig::Kind::Ising:
      return sample_ising(gen.ising, count, seed);
    case GeneratorConfig::Kind::ShotNoise:
      return sample_shot_noise(gen.shot, count, seed);
  }
  throw ConfigError("invalid generator kind");
}

}  // namespace mcgd
