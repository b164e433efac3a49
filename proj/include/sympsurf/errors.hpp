#pragma once

#include <stdexcept>
#include <string>

namespace sympsurf {

// Base class for all failures that are part of documented operation
// contracts. Programmer errors (wrong sizes passed to low-level helpers,
// contract misuse that no input file can trigger) use std::logic_error.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& what_arg) : std::runtime_error(what_arg) {}
};

// --- plane predicates ------------------------------------------------------

// A graph has no presentation over the requested coordinate axis.
class NonTransverse : public Error {
public:
  using Error::Error;
};

// A plane basis whose two vectors are linearly dependent.
class DegenerateBasis : public Error {
public:
  using Error::Error;
};

// --- chart-level perturbation ---------------------------------------------

// A perturbation stage cannot fit its support region inside the chart ball.
class ChartTooSmall : public Error {
public:
  using Error::Error;
};

// A requested perturbation size exceeds the admissible bound.
class EpsTooLarge : public Error {
public:
  using Error::Error;
};

// A slope shift would make two surfaces share a linear part.
class SlopeCollision : public Error {
public:
  using Error::Error;
};

// Repeated shrinking failed to produce parameters passing verification.
class NoAdmissibleEps : public Error {
public:
  using Error::Error;
};

// Iterative refinement (Newton) failed to reach the requested tolerance.
class NonConvergent : public Error {
public:
  using Error::Error;
};

// A point lies outside the domain of a chart map.
class OutOfDomain : public Error {
public:
  using Error::Error;
};

// An input surface family violates the admissibility margins.
class InvalidArrangement : public Error {
public:
  using Error::Error;
};

// --- neighborhood models ---------------------------------------------------

// A gluing move fails to preserve the required structures.
class NotCompatible : public Error {
public:
  using Error::Error;
};

// An evaluation point lies outside a metric chart.
class OutOfChart : public Error {
public:
  using Error::Error;
};

// --- lattice arithmetic ----------------------------------------------------

class DimensionMismatch : public Error {
public:
  using Error::Error;
};

// Adjunction produced a non-integer genus for the given class.
class NonIntegral : public Error {
public:
  using Error::Error;
};

// Adjunction produced a negative genus for the given class.
class NegativeGenus : public Error {
public:
  using Error::Error;
};

class InvalidQuery : public Error {
public:
  using Error::Error;
};

// A resolution/smoothing query over a disconnected configuration.
class Disconnected : public Error {
public:
  using Error::Error;
};

// Adjacent isotropy multiplicities are not coprime.
class GcdViolation : public Error {
public:
  using Error::Error;
};

// A prime choice violates distinctness or size constraints.
class PrimeConstraintViolated : public Error {
public:
  using Error::Error;
};

// A blow-up bookkeeping step broke the genus/canonical-class relation.
class AdjunctionBroken : public Error {
public:
  using Error::Error;
};

// --- serialization / scenarios --------------------------------------------

// Malformed input document (unknown kind, missing field, wrong shape).
class SchemaError : public Error {
public:
  using Error::Error;
};

}  // namespace sympsurf
