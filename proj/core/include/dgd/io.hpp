#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dgd/datagen.hpp"
#include "dgd/driver.hpp"
#include "dgd/evaluation.hpp"
#include "dgd/model.hpp"
#include "dgd/sweep.hpp"
#include "dgd/tensor.hpp"

namespace dgd {

// DGT container: one JSON header line
//   {"dims":[...],"dtype":"f64le","kind":"...","magic":"DGT1"}\n
// followed by product(dims) little-endian doubles. Order-3 payloads are
// slice-major (last dim outermost), each slice row-major.
//
//   adjacency, mask : dims [N, N, T]
//   signals         : dims [N, Q, T]
//   latents         : dims [N, N, R]
//   signatures      : dims [T, R]

enum class DgtKind { adjacency, mask, signals, latents, signatures };

std::string_view to_string(DgtKind kind);

struct DgtObject {
  DgtKind kind = DgtKind::adjacency;
  std::vector<std::uint64_t> dims;
  std::vector<double> data;  // payload order
};

void save_dgt(const std::filesystem::path& path, const DgtObject& obj);
/// Throws DgtError (with byte offset) on malformed files.
DgtObject load_dgt(const std::filesystem::path& path);

void write_dgt(std::ostream& os, const DgtObject& obj);
DgtObject read_dgt(std::istream& is);

DgtObject to_dgt(const DynTensor& x, DgtKind kind = DgtKind::adjacency);
DgtObject to_dgt(const MaskTensor& m);
DgtObject to_dgt(const SignalTensor& x);
DgtObject latents_to_dgt(std::span<const Matrix> latents);
DgtObject signatures_to_dgt(const Matrix& c);

/// Conversions back; throw DgtError if the kind does not match.
DynTensor dgt_to_tensor(const DgtObject& obj);
MaskTensor dgt_to_mask(const DgtObject& obj);
SignalTensor dgt_to_signals(const DgtObject& obj);
std::vector<Matrix> dgt_to_latents(const DgtObject& obj);
Matrix dgt_to_signatures(const DgtObject& obj);

// JSON configuration. Keys mirror the struct fields exactly; unknown keys and
// ill-typed values throw ConfigError naming the key.
Hyperparams parse_hyperparams(std::string_view json_text);
std::string hyperparams_to_json(const Hyperparams& h);

/// SwDyn parameters plus the observed fraction used for the mask.
struct GenerateSpec {
  SwDynSpec swdyn;
  double observed_frac = 0.9;
};
GenerateSpec parse_generate_spec(std::string_view json_text);

/// Accepts {"data": {...SwDynSpec...}, "hyper": {...}, "observed_frac", "methods",
/// "seeds", "baseline_iters", "edge_threshold"}; every part is optional.
SweepConfig parse_sweep_config(std::string_view json_text);

/// Columns iter,total,fit,sparsity,smoothness,temporal,overlap,ridge_c; row
/// iter=0 is the initialization.
void write_history_csv(std::ostream& os, const RunHistory& history);

std::string eval_report_to_json(const EvalReport& report);

std::string read_text_file(const std::filesystem::path& path);

}  // namespace dgd
