#ifndef TDEG_TDEG_HPP
#define TDEG_TDEG_HPP

#include "tdeg/certificate.hpp"
#include "tdeg/diagonal.hpp"
#include "tdeg/error.hpp"
#include "tdeg/exactla.hpp"
#include "tdeg/fst.hpp"
#include "tdeg/fst_runs.hpp"
#include "tdeg/polyatoms.hpp"
#include "tdeg/synthesis.hpp"
#include "tdeg/weights.hpp"
#include "tdeg/words.hpp"

#endif  // TDEG_TDEG_HPP
