#ifndef MEMWAVE_MEMWAVE_HPP
#define MEMWAVE_MEMWAVE_HPP

#include "memwave/config.hpp"
#include "memwave/covering.hpp"
#include "memwave/dynamics.hpp"
#include "memwave/errors.hpp"
#include "memwave/experiments.hpp"
#include "memwave/functionals.hpp"
#include "memwave/history.hpp"
#include "memwave/kernel.hpp"
#include "memwave/quadrature.hpp"
#include "memwave/spectral.hpp"

#endif // MEMWAVE_MEMWAVE_HPP
