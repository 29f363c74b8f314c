#include "jrc/kernels.hpp"

#include <atomic>
#include <stdexcept>

namespace jrc::kernels {

#ifndef JRC_HAVE_AVX2_TU
namespace detail {
const Ops* avx2_ops_or_null() { return nullptr; }
}
#endif

namespace {

const Ops* detect()
{
    if (const Ops* v = detail::avx2_ops_or_null())
        return v;
    return &scalar();
}

std::atomic<const Ops*> g_active{nullptr};

} // namespace

const Ops& active()
{
    const Ops* ops = g_active.load(std::memory_order_acquire);
    if (!ops) {
        ops = detect();
        g_active.store(ops, std::memory_order_release);
    }
    return *ops;
}

const char* backend_name()
{
    return active().name;
}

bool avx2_available()
{
    return detail::avx2_ops_or_null() != nullptr;
}

void set_backend(const std::string& name)
{
    if (name == "auto") {
        g_active.store(detect(), std::memory_order_release);
        return;
    }
    if (name == "scalar") {
        g_active.store(&scalar(), std::memory_order_release);
        return;
    }
    if (name == "avx2") {
        if (const Ops* v = detail::avx2_ops_or_null()) {
            g_active.store(v, std::memory_order_release);
            return;
        }
        throw std::invalid_argument("avx2 backend not available on this host");
    }
    throw std::invalid_argument("unknown kernel backend: " + name);
}

} // namespace jrc::kernels
