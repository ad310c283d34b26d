#include "swarmsim/kernels/kernels.hpp"

#include <cstdlib>
#include <string>
#include <vector>

#include "swarmsim/util/error.hpp"

namespace swarmsim::kernels {
namespace {

bool avx2_supported() {
#if defined(SWARMSIM_BUILD_AVX2)
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

const Ops* g_active = nullptr;

const Ops* pick_auto() {
#if defined(SWARMSIM_BUILD_AVX2)
    if (avx2_supported()) return &avx2_ops();
#endif
    return &scalar_ops();
}

const Ops* resolve(const std::string& name) {
    if (name == "auto") return pick_auto();
    if (name == "scalar") return &scalar_ops();
    if (name == "avx2") {
#if defined(SWARMSIM_BUILD_AVX2)
        if (avx2_supported()) return &avx2_ops();
#endif
        throw Error("kernel variant 'avx2' is not supported on this host");
    }
    throw Error("unknown kernel variant '" + name + "' (expected auto, scalar, or avx2)");
}

}  // namespace

std::vector<std::string> available_variants() {
    std::vector<std::string> out;
#if defined(SWARMSIM_BUILD_AVX2)
    if (avx2_supported()) out.push_back("avx2");
#endif
    out.push_back("scalar");
    return out;
}

const Ops& active() {
    if (!g_active) {
        const char* env = std::getenv("SWARMSIM_KERNEL");
        g_active = resolve(env && *env ? env : "auto");
    }
    return *g_active;
}

void select(const std::string& name) { g_active = resolve(name); }

}  // namespace swarmsim::kernels
