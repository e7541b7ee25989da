#pragma once

// Umbrella header: exact-arithmetic chord diagram calculus on (dotted)
// trivalent graph skeletons, strand algebras, and the degree-2 associator
// machinery.

#include "ktg/associator.hpp"
#include "ktg/diagram.hpp"
#include "ktg/graph_ops.hpp"
#include "ktg/io.hpp"
#include "ktg/linalg.hpp"
#include "ktg/poly.hpp"
#include "ktg/rational.hpp"
#include "ktg/relations.hpp"
#include "ktg/skeleton.hpp"
#include "ktg/strand_algebra.hpp"
