#pragma once

// Power-limited qubit channel simulator: state vectors, swap Hamiltonians,
// energy accounting, capacity laws, and transfer protocols.

#include "qchan/capacity.hpp"
#include "qchan/common.hpp"
#include "qchan/energetics.hpp"
#include "qchan/io.hpp"
#include "qchan/operators.hpp"
#include "qchan/protocols.hpp"
#include "qchan/statevec.hpp"
