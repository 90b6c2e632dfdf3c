#pragma once

#include "digits.hpp"
#include "perm.hpp"
#include "subset.hpp"
#include "automaton.hpp"
#include "transducer.hpp"
#include "group.hpp"
#include "structure.hpp"
#include "numbertheory.hpp"
#include "harmonic.hpp"
#include "io.hpp"
