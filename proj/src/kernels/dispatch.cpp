#include <atomic>
#include <cstdlib>
#include <string>

#include "qwalk/errors.hpp"
#include "qwalk/kernels.hpp"

namespace qwalk::kernels {

#ifndef QWALK_HAVE_AVX2
const KernelTable* avx2_table() noexcept { return nullptr; }
#endif

bool cpu_has_avx2() noexcept {
#if defined(QWALK_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

std::vector<const KernelTable*> available() noexcept {
  std::vector<const KernelTable*> out{&scalar_table()};
  if (avx2_table() != nullptr && cpu_has_avx2()) out.push_back(avx2_table());
  return out;
}

Isa parse_isa(std::string_view text) {
  if (text == "scalar") return Isa::Scalar;
  if (text == "avx2") return Isa::Avx2;
  throw ValidationError("unknown kernel ISA '" + std::string(text) + "' (expected scalar or avx2)");
}

const KernelTable& table_for(Isa isa) {
  if (isa == Isa::Scalar) return scalar_table();
  if (avx2_table() == nullptr) throw ValidationError("this build has no AVX2 kernels");
  if (!cpu_has_avx2()) throw ValidationError("CPU does not support AVX2/FMA");
  return *avx2_table();
}

namespace {

const KernelTable* resolve_default() noexcept {
  if (const char* env = std::getenv("QWALK_ISA"); env != nullptr && *env != '\0') {
    const std::string_view want(env);
    if (want == "scalar") return &scalar_table();
    if (want == "avx2" && avx2_table() != nullptr && cpu_has_avx2()) return avx2_table();
  }
  return available().back();
}

std::atomic<const KernelTable*>& slot() noexcept {
  static std::atomic<const KernelTable*> table{resolve_default()};
  return table;
}

}  // namespace

const KernelTable& active() noexcept { return *slot().load(std::memory_order_acquire); }

void set_active(Isa isa) { slot().store(&table_for(isa), std::memory_order_release); }

}  // namespace qwalk::kernels
