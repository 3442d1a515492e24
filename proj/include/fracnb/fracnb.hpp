#ifndef FRACNB_FRACNB_HPP
#define FRACNB_FRACNB_HPP

#include "errors.hpp"
#include "version.hpp"
#include "series.hpp"
#include "specfun.hpp"
#include "quadrature.hpp"
#include "rng.hpp"
#include "dist.hpp"
#include "paths.hpp"
#include "fraccalc.hpp"
#include "stats.hpp"
#include "verify.hpp"
#include "io.hpp"

#endif
