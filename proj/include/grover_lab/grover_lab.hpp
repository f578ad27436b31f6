#pragma once

#include "grover_lab/analysis.hpp"
#include "grover_lab/dense_tensor.hpp"
#include "grover_lab/diagram.hpp"
#include "grover_lab/error.hpp"
#include "grover_lab/eval.hpp"
#include "grover_lab/generator.hpp"
#include "grover_lab/grover_diagram.hpp"
#include "grover_lab/rewrite.hpp"
#include "grover_lab/serialize.hpp"
#include "grover_lab/simulator.hpp"
#include "grover_lab/space.hpp"
