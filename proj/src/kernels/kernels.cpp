#include "quadmpc/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <cstring>

namespace quadmpc::kern {
namespace {

bool cpu_has_avx2_fma() {
#if defined(__x86_64__)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const KernelTable* table_by_name(const std::string& name) {
  if (name == "scalar") return &scalar_table();
#if defined(__x86_64__)
  if (name == "avx2" && cpu_has_avx2_fma()) return &avx2_table();
#endif
#if defined(__aarch64__)
  if (name == "neon") return &neon_table();
#endif
  return nullptr;
}

const KernelTable* pick_default() {
  if (const char* env = std::getenv("QUADMPC_KERNEL")) {
    if (const KernelTable* t = table_by_name(env)) return t;
  }
#if defined(__x86_64__)
  if (cpu_has_avx2_fma()) return &avx2_table();
#endif
#if defined(__aarch64__)
  return &neon_table();
#endif
  return &scalar_table();
}

std::atomic<const KernelTable*>& active_slot() {
  static std::atomic<const KernelTable*> slot{pick_default()};
  return slot;
}

}  // namespace

const KernelTable& active() { return *active_slot().load(std::memory_order_relaxed); }

bool set_backend(const std::string& name) {
  const KernelTable* t = table_by_name(name);
  if (!t) return false;
  active_slot().store(t, std::memory_order_relaxed);
  return true;
}

std::vector<std::string> available_backends() {
  std::vector<std::string> out{"scalar"};
#if defined(__x86_64__)
  if (cpu_has_avx2_fma()) out.emplace_back("avx2");
#endif
#if defined(__aarch64__)
  out.emplace_back("neon");
#endif
  return out;
}

}  // namespace quadmpc::kern
