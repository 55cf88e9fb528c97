#pragma once

#include "bjlab/certificate.hpp"
#include "bjlab/decomposition.hpp"
#include "bjlab/dilation.hpp"
#include "bjlab/functionals.hpp"
#include "bjlab/operator.hpp"
#include "bjlab/operators.hpp"
#include "bjlab/orthogonality.hpp"
#include "bjlab/random.hpp"
#include "bjlab/shifts.hpp"
#include "bjlab/space.hpp"
#include "bjlab/subspace.hpp"
#include "bjlab/types.hpp"
#include "bjlab/gallery.hpp"
