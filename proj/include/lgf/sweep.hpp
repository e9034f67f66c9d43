#pragma once

#include <cstdint>
#include <exception>
#include <vector>

namespace lgf::sweep {

/// out[i] = f(in[i]) evaluated in order.
template <class In, class F>
auto map_serial(const std::vector<In>& in, F&& f) {
    using Out = decltype(f(in.front()));
    std::vector<Out> out;
    out.reserve(in.size());
    for (const auto& v : in) out.push_back(f(v));
    return out;
}

/// out[i] = f(in[i]) with the items spread over OpenMP threads. The output order is the
/// input order. The first exception (by index) is rethrown after the loop.
template <class In, class F>
auto map_omp(const std::vector<In>& in, F&& f) {
    using Out = decltype(f(in.front()));
    const auto n = static_cast<std::int64_t>(in.size());
    std::vector<Out> out(in.size());
    std::vector<std::exception_ptr> errors(in.size());
#pragma omp parallel for schedule(dynamic, 1)
    for (std::int64_t i = 0; i < n; ++i) {
        try {
            out[i] = f(in[i]);
        } catch (...) {
            errors[i] = std::current_exception();
        }
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    return out;
}

}  // namespace lgf::sweep
