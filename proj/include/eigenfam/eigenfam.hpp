#pragma once

#include "eigenfam/errors.hpp"
#include "eigenfam/jet.hpp"
#include "eigenfam/jet_matrix.hpp"
#include "eigenfam/tolerance.hpp"
#include "eigenfam/chart.hpp"
#include "eigenfam/operators.hpp"
#include "eigenfam/family.hpp"
#include "eigenfam/manifolds.hpp"
#include "eigenfam/report.hpp"
#include "eigenfam/verify.hpp"
#include "eigenfam/transforms.hpp"
#include "eigenfam/submersions.hpp"
