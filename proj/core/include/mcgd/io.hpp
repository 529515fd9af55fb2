#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mcgd/energy.hpp"
#include "mcgd/filters.hpp"
#include "mcgd/grid.hpp"
#include "mcgd/sampler.hpp"

namespace mcgd {

// All writers are atomic (temp file + rename) and throw IoError on failure.

// Lossless interchange container for real fields: magic "MSIG", version,
// rank, rows, cols, then row-major little-endian 64-bit floats.
void save_signal(const std::string& path, const PeriodicSignal& x);
PeriodicSignal load_signal(const std::string& path);

// Binary filter-bank container (spectra are stored verbatim so a loaded
// bank reproduces energies bit-for-bit).
void save_bank(const std::string& path, const FilterBank& bank);
FilterBank load_bank(const std::string& path);

// 8-bit binary PGM (P5, maxval 255).
struct PgmImage {
  std::int64_t rows = 0;
  std::int64_t cols = 0;
  std::vector<std::uint8_t> pixels;
};
PgmImage read_pgm(const std::string& path);
void write_pgm(const std::string& path, const PgmImage& img);

// Pixel <-> real-field mapping: load standardizes to zero mean / unit
// variance; save inverts with the provided moments and clips to [0, 255].
PeriodicSignal standardize(const PgmImage& img, double* mean_out = nullptr,
                           double* std_out = nullptr);
PgmImage destandardize(const PeriodicSignal& x, double mean, double stddev);

// 16-bit PCM mono WAV; samples map to [-1, 1) as s / 32768, writing clips.
PeriodicSignal read_wav(const std::string& path, int* sample_rate = nullptr);
void write_wav(const std::string& path, const PeriodicSignal& x, int sample_rate = 44100);

// Two-column CSV "label,value" with full double precision.
void write_csv(const std::string& path, const std::vector<std::string>& labels,
               const std::vector<double>& values);
void write_csv(const std::string& path, const EnergyVector& phi);
// Reads the same layout back (labels may contain no commas).
void read_csv(const std::string& path, std::vector<std::string>& labels,
              std::vector<double>& values);

// Per-iteration descent log: iter,objective,phi_dist,grad_norm,kappa.
void write_trace_csv(const std::string& path, const DescentTrace& trace);

void write_text_file(const std::string& path, const std::string& text);
std::string read_text_file(const std::string& path);

}  // namespace mcgd
