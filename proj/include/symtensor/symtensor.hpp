#pragma once

#include "symtensor/binary_form.hpp"
#include "symtensor/decomposition.hpp"
#include "symtensor/error.hpp"
#include "symtensor/io.hpp"
#include "symtensor/linalg.hpp"
#include "symtensor/norms.hpp"
#include "symtensor/oracle.hpp"
#include "symtensor/power.hpp"
#include "symtensor/random.hpp"
#include "symtensor/rank1.hpp"
#include "symtensor/recovery.hpp"
#include "symtensor/symrank.hpp"
#include "symtensor/tensor.hpp"
