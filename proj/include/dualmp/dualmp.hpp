#pragma once

#include "dualmp/config.hpp"
#include "dualmp/dual.hpp"
#include "dualmp/errors.hpp"
#include "dualmp/experiment.hpp"
#include "dualmp/field_io.hpp"
#include "dualmp/grid.hpp"
#include "dualmp/krylov.hpp"
#include "dualmp/mpsolve.hpp"
#include "dualmp/nfunc.hpp"
#include "dualmp/orlicz.hpp"
#include "dualmp/pohozaev.hpp"
#include "dualmp/poisson.hpp"
#include "dualmp/quadrature.hpp"
