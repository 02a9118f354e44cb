#pragma once

#include "ptsusy/errors.hpp"
#include "ptsusy/special_functions.hpp"
#include "ptsusy/potentials.hpp"
#include "ptsusy/susy.hpp"
#include "ptsusy/psusy.hpp"
#include "ptsusy/ssusy.hpp"
#include "ptsusy/numerics/grid.hpp"
#include "ptsusy/numerics/finite_difference.hpp"
#include "ptsusy/numerics/matrix.hpp"
#include "ptsusy/numerics/eigensolver.hpp"
#include "ptsusy/numerics/hamiltonian.hpp"
#include "ptsusy/numerics/probe.hpp"
#include "ptsusy/numerics/spectrum.hpp"
#include "ptsusy/numerics/work_queue.hpp"
#include "ptsusy/io.hpp"
