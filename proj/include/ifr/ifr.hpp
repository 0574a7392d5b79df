#pragma once

#include "ifr/assembly.hpp"
#include "ifr/benchmarks.hpp"
#include "ifr/diagnostics.hpp"
#include "ifr/drivers.hpp"
#include "ifr/error.hpp"
#include "ifr/jump_law.hpp"
#include "ifr/mesh.hpp"
#include "ifr/reduction.hpp"
#include "ifr/tridiagonal.hpp"
