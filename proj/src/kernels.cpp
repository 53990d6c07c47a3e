#include "grace/kernels.hpp"

#include <cstdlib>
#include <stdexcept>
#include <string>

namespace grace::kernels {

const KernelTable& scalar_table();
#if defined(__x86_64__) || defined(_M_X64)
const KernelTable& avx2_table();
#endif
#if defined(__aarch64__)
const KernelTable& neon_table();
#endif

const char* backend_name(Backend b) {
  switch (b) {
    case Backend::scalar:
      return "scalar";
    case Backend::avx2:
      return "avx2";
    case Backend::neon:
      return "neon";
  }
  return "unknown";
}

bool backend_available(Backend b) {
  switch (b) {
    case Backend::scalar:
      return true;
    case Backend::avx2:
#if defined(__x86_64__) || defined(_M_X64)
      return __builtin_cpu_supports("avx2") != 0;
#else
      return false;
#endif
    case Backend::neon:
#if defined(__aarch64__)
      return true;
#else
      return false;
#endif
  }
  return false;
}

const KernelTable& table_for(Backend b) {
  if (!backend_available(b))
    throw std::runtime_error(std::string("kernel backend not available: ") +
                             backend_name(b));
  switch (b) {
    case Backend::scalar:
      return scalar_table();
#if defined(__x86_64__) || defined(_M_X64)
    case Backend::avx2:
      return avx2_table();
#endif
#if defined(__aarch64__)
    case Backend::neon:
      return neon_table();
#endif
    default:
      return scalar_table();
  }
}

namespace {

Backend select_backend() {
  if (const char* env = std::getenv("GRACE_KERNELS")) {
    std::string want(env);
    for (Backend b : {Backend::scalar, Backend::avx2, Backend::neon}) {
      if (want == backend_name(b)) {
        if (!backend_available(b))
          throw std::runtime_error("GRACE_KERNELS requests unavailable backend: " +
                                   want);
        return b;
      }
    }
    throw std::runtime_error("unknown GRACE_KERNELS value: " + want);
  }
  if (backend_available(Backend::avx2)) return Backend::avx2;
  if (backend_available(Backend::neon)) return Backend::neon;
  return Backend::scalar;
}

}  // namespace

Backend active_backend() {
  static const Backend b = select_backend();
  return b;
}

const KernelTable& table() {
  static const KernelTable& t = table_for(active_backend());
  return t;
}

}  // namespace grace::kernels
