#pragma once

#include "vqebench/ansatz_adaptive.hpp"
#include "vqebench/ansatz_fixed.hpp"
#include "vqebench/ansatz_layered.hpp"
#include "vqebench/bench.hpp"
#include "vqebench/errors.hpp"
#include "vqebench/fcidump.hpp"
#include "vqebench/hamiltonian.hpp"
#include "vqebench/operators.hpp"
#include "vqebench/optimizer.hpp"
#include "vqebench/statevector.hpp"
#include "vqebench/vqe.hpp"
