#pragma once

#include "bcslab/assignments.hpp"
#include "bcslab/bcs.hpp"
#include "bcslab/dense.hpp"
#include "bcslab/error.hpp"
#include "bcslab/game.hpp"
#include "bcslab/game_sim.hpp"
#include "bcslab/json_io.hpp"
#include "bcslab/ncpoly.hpp"
#include "bcslab/pauli.hpp"
#include "bcslab/rational.hpp"
#include "bcslab/reductions.hpp"
#include "bcslab/rewrite.hpp"
#include "bcslab/solvers.hpp"
