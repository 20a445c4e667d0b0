#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "kernels_impl.hpp"

namespace rcd::kernels {
namespace {

bool cpu_has(Isa isa) {
#if defined(RCD_HAVE_X86_KERNELS)
  switch (isa) {
    case Isa::scalar:
      return true;
    case Isa::avx2:
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
    case Isa::avx512:
      return __builtin_cpu_supports("avx512f") && __builtin_cpu_supports("avx2") &&
             __builtin_cpu_supports("fma");
  }
  return false;
#else
  return isa == Isa::scalar;
#endif
}

Isa best_available() {
  if (const char* env = std::getenv("RCD_SIMD")) {
    const Isa requested = parse_isa(env);
    if (cpu_has(requested)) return requested;
  }
  // AVX-512 gathers are not reliably faster than AVX2 ones for the short
  // columns typical here, so AVX2 is the default when both exist.
  if (cpu_has(Isa::avx2)) return Isa::avx2;
  return Isa::scalar;
}

struct Active {
  std::atomic<Isa> isa;
  std::atomic<const Table*> table;
  Active() : isa(best_available()), table(&kernels::table(isa.load())) {}
};

Active& state() {
  static Active a;
  return a;
}

}  // namespace

bool supported(Isa isa) { return cpu_has(isa); }

const Table& table(Isa isa) {
  if (!cpu_has(isa))
    throw std::invalid_argument("kernel ISA not available: " + std::string(name(isa)));
  switch (isa) {
#if defined(RCD_HAVE_X86_KERNELS)
    case Isa::avx2:
      return avx2::table();
    case Isa::avx512:
      return avx512::table();
#endif
    default:
      return scalar::table();
  }
}

const Table& active() { return *state().table.load(std::memory_order_relaxed); }

Isa active_isa() { return state().isa.load(); }

void select(Isa isa) {
  const Table& t = table(isa);
  state().isa.store(isa);
  state().table.store(&t);
}

std::string_view name(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return "scalar";
    case Isa::avx2:
      return "avx2";
    case Isa::avx512:
      return "avx512";
  }
  return "unknown";
}

Isa parse_isa(std::string_view text) {
  if (text == "scalar") return Isa::scalar;
  if (text == "avx2") return Isa::avx2;
  if (text == "avx512") return Isa::avx512;
  throw std::invalid_argument("unknown kernel ISA: " + std::string(text));
}

}  // namespace rcd::kernels
