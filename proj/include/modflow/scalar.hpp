#ifndef MODFLOW_SCALAR_HPP
#define MODFLOW_SCALAR_HPP

#include "modflow/jet.hpp"
#include "modflow/taylor.hpp"

namespace modflow
{

// Number of derivatives a scalar type needs when a special function is lifted
// onto it.
template <typename T>
struct lift_order;

template <>
struct lift_order<cplx> {
    static constexpr int value = 0;
};

template <int N>
struct lift_order<Jet<N>> {
    static constexpr int value = 1;
};

template <int N>
struct lift_order<Series<N>> {
    static constexpr int value = N;
};

} // namespace modflow

#endif
