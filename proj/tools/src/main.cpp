// Command line for microcanonical gradient-descent models: generate ground
// truths, synthesize from one realization, and compute validation reports.

#include <algorithm>
#include <cctype>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "mcgd/config.hpp"
#include "mcgd/io.hpp"
#include "mcgd/rng.hpp"
#include "mcgd/stats.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace mcgd;

namespace {

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory: " + dir);
}

std::string join(const std::string& dir, const std::string& name) {
  return (fs::path(dir) / name).string();
}

std::string numbered(const char* stem, std::size_t i, const char* ext) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s_%04zu%s", stem, i, ext);
  return buf;
}

std::string lower_ext(const std::string& path) {
  std::string e = fs::path(path).extension().string();
  std::transform(e.begin(), e.end(), e.begin(), [](unsigned char c) { return std::tolower(c); });
  return e;
}

// Greyscale preview of an arbitrary real field (3-sigma window around the mean).
PgmImage preview_pgm(const PeriodicSignal& x) {
  const double m = mean(x.v);
  double var = 0.0;
  for (double v : x.v) var += (v - m) * (v - m);
  var /= static_cast<double>(x.v.size());
  const double s = var > 0.0 ? std::sqrt(var) : 1.0;
  PeriodicSignal z(x.shape);
  for (std::size_t i = 0; i < z.v.size(); ++i) z.v[i] = (x.v[i] - m) / s;
  return destandardize(z, 127.5, 127.5 / 3.0);
}

struct LoadedInput {
  enum class Format { Msig, Pgm, Wav } format = Format::Msig;
  PeriodicSignal x;
  double px_mean = 0.0, px_std = 1.0;  // Pgm
  int sample_rate = 44100;             // Wav
};

LoadedInput load_input(const std::string& path) {
  LoadedInput in;
  const std::string ext = lower_ext(path);
  if (ext == ".msig") {
    in.format = LoadedInput::Format::Msig;
    in.x = load_signal(path);
  } else if (ext == ".pgm") {
    in.format = LoadedInput::Format::Pgm;
    in.x = standardize(read_pgm(path), &in.px_mean, &in.px_std);
  } else if (ext == ".wav") {
    in.format = LoadedInput::Format::Wav;
    in.x = read_wav(path, &in.sample_rate);
  } else {
    throw ConfigError("unsupported input format \"" + ext + "\" (use .msig, .pgm or .wav)");
  }
  return in;
}

int cmd_generate(const std::string& config_path, int count, std::uint64_t seed,
                 const std::string& out_dir, bool previews) {
  const std::string text = read_text_file(config_path);
  const GeneratorConfig gen = parse_generator_config(text);
  const auto samples = run_generator(gen, count, seed);

  ensure_dir(out_dir);
  json manifest;
  manifest["command"] = "generate";
  manifest["model"] = json::parse(text);
  manifest["count"] = count;
  manifest["seed"] = seed;
  std::vector<std::string> files;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const std::string name = numbered("sample", i, ".msig");
    save_signal(join(out_dir, name), samples[i]);
    files.push_back(name);
    if (previews && samples[i].shape.rank == 2)
      write_pgm(join(out_dir, numbered("sample", i, ".pgm")), preview_pgm(samples[i]));
  }
  manifest["files"] = files;
  write_text_file(join(out_dir, "manifest.json"), manifest.dump(2) + "\n");
  std::printf("wrote %zu samples to %s\n", samples.size(), out_dir.c_str());
  return 0;
}

int cmd_synth(const std::string& input_path, const std::string& energy_path,
              const std::string& descent_path, int count, std::uint64_t seed,
              const std::string& out_dir) {
  const LoadedInput in = load_input(input_path);
  const std::string energy_text = read_text_file(energy_path);
  const EnergySpec spec = parse_energy_spec(energy_text, in.x.shape);
  DescentConfig cfg;
  std::string descent_text = "{}";
  if (!descent_path.empty()) {
    descent_text = read_text_file(descent_path);
    cfg = parse_descent_config(descent_text);
  }

  const SynthesisResult res = synthesize(in.x, spec, count, cfg, seed);

  ensure_dir(out_dir);
  write_csv(join(out_dir, "target.csv"), res.target);
  json manifest;
  manifest["command"] = "synth";
  manifest["input"] = fs::path(input_path).filename().string();
  manifest["energy"] = json::parse(energy_text);
  manifest["descent"] = json::parse(descent_text);
  manifest["count"] = count;
  manifest["seed"] = seed;
  manifest["eps_abs"] = res.eps_abs;
  manifest["descriptor_count"] = spec.size();

  std::vector<std::string> files;
  json per_sample = json::array();
  int converged = 0;
  for (std::size_t i = 0; i < res.samples.size(); ++i) {
    const std::string name = numbered("synth", i, ".msig");
    save_signal(join(out_dir, name), res.samples[i]);
    files.push_back(name);
    if (in.format == LoadedInput::Format::Pgm)
      write_pgm(join(out_dir, numbered("synth", i, ".pgm")),
                destandardize(res.samples[i], in.px_mean, in.px_std));
    else if (in.format == LoadedInput::Format::Wav)
      write_wav(join(out_dir, numbered("synth", i, ".wav")), res.samples[i], in.sample_rate);
    write_trace_csv(join(out_dir, numbered("trace", i, ".csv")), res.traces[i]);

    const DescentTrace& tr = res.traces[i];
    converged += tr.converged ? 1 : 0;
    per_sample.push_back({{"file", name},
                          {"converged", tr.converged},
                          {"stalled", tr.stalled},
                          {"iters", tr.iters_used},
                          {"final_phi_dist", tr.final_phi_dist}});
  }
  manifest["files"] = files;
  manifest["samples"] = per_sample;
  write_text_file(join(out_dir, "manifest.json"), manifest.dump(2) + "\n");
  std::printf("synthesized %zu samples (K=%zu, eps=%.6g, %d/%zu reached eps) in %s\n",
              res.samples.size(), spec.size(), res.eps_abs, converged, res.samples.size(),
              out_dir.c_str());
  return 0;
}

int cmd_stats(const std::string& dir, const std::string& energy_path,
              const std::string& reference_path, const std::string& out_dir) {
  std::vector<std::string> files;
  {
    std::error_code ec;
    fs::directory_iterator it(dir, ec);
    if (ec) throw IoError("cannot read directory: " + dir);
    for (const auto& entry : it)
      if (entry.is_regular_file() && lower_ext(entry.path().string()) == ".msig")
        files.push_back(entry.path().string());
  }
  std::sort(files.begin(), files.end());
  if (files.size() < 2) throw ConfigError("need at least 2 .msig samples in " + dir);

  std::vector<PeriodicSignal> samples;
  samples.reserve(files.size());
  for (const auto& f : files) {
    samples.push_back(load_signal(f));
    if (samples.back().shape != samples.front().shape)
      throw ConfigError("mixed sample shapes in " + dir);
  }

  const EnergySpec spec = parse_energy_spec(read_text_file(energy_path), samples[0].shape);
  const auto labels = spec.make_labels();
  const auto phis = eval_batch(samples, spec);
  const std::string col = fs::path(energy_path).stem().string();
  const ConcentrationReport rep = normalized_variance(phis, col);

  std::vector<std::string> rows = {"sigma2_norm"};
  std::vector<std::vector<double>> cells = {{rep.sigma2}};
  ModelErrorReport err;
  if (!reference_path.empty()) {
    std::vector<std::string> ref_labels;
    std::vector<double> ref_values;
    read_csv(reference_path, ref_labels, ref_values);
    if (ref_labels != labels)
      throw ConfigError("reference labels do not match the energy spec: " + reference_path);
    err = model_error(phis, ref_values, fs::path(reference_path).stem().string());
    rows.push_back("e2_model");
    cells.push_back({err.e2});
  }

  const std::string table = format_table("metric (N=" + std::to_string(rep.count) + ")", rows,
                                         {col}, cells);
  std::fputs(table.c_str(), stdout);

  if (!out_dir.empty()) {
    ensure_dir(out_dir);
    write_csv(join(out_dir, "mean_energy.csv"), labels, rep.mean_phi);
    write_csv(join(out_dir, "variance_per_descriptor.csv"), labels, rep.per_slot);
    std::vector<std::string> summary_labels = {"sigma2_norm", "count"};
    std::vector<double> summary_values = {rep.sigma2, static_cast<double>(rep.count)};
    if (!reference_path.empty()) {
      write_csv(join(out_dir, "model_error_per_descriptor.csv"), labels, err.per_slot);
      summary_labels.push_back("e2_model");
      summary_values.push_back(err.e2);
    }
    write_csv(join(out_dir, "summary.csv"), summary_labels, summary_values);
    write_text_file(join(out_dir, "report.txt"), table);
  }
  return 0;
}

int cmd_banks(const std::string& type, std::int64_t side, int J, int Q, int rank,
              const std::string& out_path) {
  FilterBank bank;
  if (type == "morlet2d")
    bank = build_morlet_2d(side, J, Q);
  else if (type == "gabor1d")
    bank = build_gabor_1d(side, J, Q);
  else if (type == "shannon")
    bank = build_shannon_bank(rank == 1 ? GridShape::line(side) : GridShape::square(side), J);
  else
    throw ConfigError("unknown bank type \"" + type + "\"");
  save_bank(out_path, bank);
  std::printf("%s: %zu bands + low-pass on %" PRId64 "^%d, gamma=%.6g -> %s\n", type.c_str(),
              bank.bands.size(), side, bank.dims.rank, bank.gamma, out_path.c_str());
  return 0;
}

// ---- self checks ----------------------------------------------------------

bool report(const char* name, bool ok, double value) {
  std::printf("[%s] %-42s %.3g\n", ok ? "ok" : "FAIL", name, value);
  return ok;
}

PeriodicSignal random_signal(GridShape shape, std::uint64_t seed);

int cmd_check() {
  bool all = true;

  {
    const FilterBank sh = build_shannon_bank(GridShape::square(64), 6);
    all &= report("shannon littlewood-paley gamma <= 1e-12", sh.gamma <= 1e-12, sh.gamma);
  }
  const FilterBank morlet = build_morlet_2d(64, 5, 8);
  all &= report("morlet2d littlewood-paley gamma < 0.3", morlet.gamma < 0.3, morlet.gamma);
  const FilterBank gabor = build_gabor_1d(1024, 6, 12);
  all &= report("gabor1d littlewood-paley gamma < 0.3", gabor.gamma < 0.3, gabor.gamma);

  {
    // Two-level energy decomposition under an exact frame partition.
    const std::int64_t d = 256;
    const FilterBank sh = build_shannon_bank(GridShape::line(d), 8);
    const PeriodicSignal x = random_signal(GridShape::line(d), 7);
    const double invd = 1.0 / static_cast<double>(d);
    double worst = 0.0;
    for (const auto& band : sh.bands) {
      ComplexField c1 = circular_convolve(x, band.hat);
      double lhs = 0.0;
      PeriodicSignal m1(x.shape);
      for (std::size_t i = 0; i < m1.v.size(); ++i) {
        lhs += std::norm(c1.v[i]);
        m1.v[i] = std::abs(c1.v[i]);
      }
      double rhs = invd * l1_norm(m1.v) * l1_norm(m1.v);
      for (const auto& band2 : sh.bands) {
        ComplexField c2 = circular_convolve(m1, band2.hat);
        PeriodicSignal m2(x.shape);
        for (std::size_t i = 0; i < m2.v.size(); ++i) m2.v[i] = std::abs(c2.v[i]);
        rhs += invd * l1_norm(m2.v) * l1_norm(m2.v);
        double third = 0.0;
        for (const auto& band3 : sh.bands) {
          ComplexField c3 = circular_convolve(m2, band3.hat);
          for (const auto& z : c3.v) third += std::norm(z);
        }
        rhs += third;
      }
      worst = std::max(worst, std::fabs(lhs - rhs) / std::fabs(lhs));
    }
    all &= report("band energy decomposition rel err <= 1e-8", worst <= 1e-8, worst);
  }

  {
    EnergySpec spec;
    spec.family = Family::WaveletL2;
    spec.bank = std::make_shared<FilterBank>(build_morlet_2d(32, 3, 2));
    const PeriodicSignal x = random_signal(GridShape::square(32), 11);
    const auto a = eval_phi(x, spec);
    const auto b = eval_phi(translate(x, 5, 13), spec);
    double worst = 0.0;
    for (std::size_t k = 0; k < a.values.size(); ++k)
      worst = std::max(worst, std::fabs(a.values[k] - b.values[k]));
    all &= report("energy shift invariance <= 1e-10", worst <= 1e-10, worst);
  }

  {
    EnergySpec spec;
    spec.family = Family::Scattering;
    spec.bank = std::make_shared<FilterBank>(build_gabor_1d(32, 3, 1));
    spec.pairs = increasing_scale_pairs(*spec.bank);
    spec.include_mean = true;
    spec.eps_mod = 1e-3;
    const PeriodicSignal x = random_signal(GridShape::line(32), 23);
    EnergyVector y = eval_phi(x, spec);
    for (auto& v : y.values) v *= 0.9;  // off-target residual
    EnergyEvaluator ev(spec);
    const auto gr = ev.grad_objective(x, y);
    const PeriodicSignal dir = random_signal(GridShape::line(32), 29);
    double dot = 0.0;
    for (std::size_t i = 0; i < dir.v.size(); ++i) dot += gr.grad.v[i] * dir.v[i];
    const double h = 1e-6;
    PeriodicSignal xp = x, xm = x;
    for (std::size_t i = 0; i < x.v.size(); ++i) {
      xp.v[i] += h * dir.v[i];
      xm.v[i] -= h * dir.v[i];
    }
    const double fd =
        (eval_objective(xp, y, spec) - eval_objective(xm, y, spec)) / (2.0 * h);
    const double rel = std::fabs(fd - dot) / std::max(1e-300, std::fabs(fd));
    all &= report("scattering gradient vs fin. diff <= 1e-5", rel <= 1e-5, rel);
  }

  {
    std::vector<std::vector<double>> phis;
    Rng rng(3, 0);
    for (int i = 0; i < 8; ++i) {
      std::vector<double> p(5);
      for (auto& v : p) v = rng.gaussian() + 2.0;
      phis.push_back(std::move(p));
    }
    const auto conc = normalized_variance(phis);
    const auto err = model_error(phis, conc.mean_phi);
    const double diff = std::fabs(conc.sigma2 - err.e2);
    all &= report("model error equals variance at own mean", diff <= 1e-12, diff);
  }

  std::printf("%s\n", all ? "all checks passed" : "CHECKS FAILED");
  return all ? 0 : 1;
}

PeriodicSignal random_signal(GridShape shape, std::uint64_t seed) {
  Rng rng(seed, 0);
  PeriodicSignal x(shape);
  for (auto& v : x.v) v = rng.gaussian();
  return x;
}

int run(int argc, char** argv) {
  CLI::App app{"Microcanonical gradient-descent models of stationary processes"};
  app.require_subcommand(1);
  int threads = 0;
  app.add_option("--threads", threads, "worker threads (overrides MCGD_THREADS)");

  std::string config_path, input_path, energy_path, descent_path, reference_path;
  std::string dir, out_path, type = "morlet2d";
  int count = 16, J = 5, Q = 1, rank = 2;
  std::int64_t side = 128;
  std::uint64_t seed = 0;
  bool previews = false;

  auto* g = app.add_subcommand("generate", "Sample a ground-truth process to .msig files");
  g->add_option("--model", config_path, "model config JSON")->required();
  g->add_option("--count", count, "number of samples");
  g->add_option("--seed", seed, "RNG seed");
  g->add_option("--out", out_path, "output directory")->required();
  g->add_flag("--previews", previews, "also write PGM previews");

  auto* s = app.add_subcommand("synth", "Synthesize new realizations from one input");
  s->add_option("--input", input_path, "input .msig/.pgm/.wav")->required();
  s->add_option("--energy", energy_path, "energy spec JSON")->required();
  s->add_option("--descent", descent_path, "descent config JSON");
  s->add_option("--count", count, "number of samples");
  s->add_option("--seed", seed, "RNG seed");
  s->add_option("--out", out_path, "output directory")->required();

  auto* t = app.add_subcommand("stats", "Concentration / model-error report over a sample dir");
  t->add_option("--dir", dir, "directory of .msig samples")->required();
  t->add_option("--energy", energy_path, "energy spec JSON")->required();
  t->add_option("--reference", reference_path, "reference mean energy CSV");
  t->add_option("--out", out_path, "report output directory");

  auto* b = app.add_subcommand("banks", "Build and export a filter bank");
  b->add_option("--type", type, "morlet2d|gabor1d|shannon");
  b->add_option("--side", side, "grid side length");
  b->add_option("--J", J, "number of octaves");
  b->add_option("--Q", Q, "bands per octave");
  b->add_option("--rank", rank, "grid rank for shannon (1 or 2)");
  b->add_option("--out", out_path, "output .mbnk path")->required();

  auto* c = app.add_subcommand("check", "Run quick numerical self-checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (threads > 0) {
    const std::string v = std::to_string(threads);
    setenv("MCGD_THREADS", v.c_str(), 1);
  }

  if (g->parsed()) return cmd_generate(config_path, count, seed, out_path, previews);
  if (s->parsed()) return cmd_synth(input_path, energy_path, descent_path, count, seed, out_path);
  if (t->parsed()) return cmd_stats(dir, energy_path, reference_path, out_path);
  if (b->parsed()) return cmd_banks(type, side, J, Q, rank, out_path);
  if (c->parsed()) return cmd_check();
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const NumericError& e) {
    if (e.iteration >= 0)
      std::fprintf(stderr, "numerical failure at iteration %ld: %s\n", e.iteration, e.what());
    else
      std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return 3;
  } catch (const IoError& e) {
    std::fprintf(stderr, "i/o error: %s\n", e.what());
    return 4;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
