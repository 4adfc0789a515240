#pragma once

#include <stdexcept>
#include <string>

namespace gauge {

class Error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// Wrong vector/matrix sizes or grid shape.
class DimensionError : public Error
{
public:
  using Error::Error;
};

/// A matrix failed the group (or subgroup) membership test.
class MembershipError : public Error
{
public:
  using Error::Error;
};

/// A coset point lies outside the domain of the requested section chart.
class ChartDomainError : public Error
{
public:
  using Error::Error;
};

/// Internal consistency of a group model was violated (wrong section or chart bookkeeping,
/// non-affine jet dependence, bad metric signature).
class ModelError : public Error
{
public:
  using Error::Error;
};

/// Missing or inconsistent atlas data.
class StructureError : public Error
{
public:
  using Error::Error;
};

/// The operation's hypothesis does not hold for this model.
class UnsupportedModelError : public Error
{
public:
  using Error::Error;
};

class PreconditionError : public Error
{
public:
  using Error::Error;
};

/// Unknown scenario, group or malformed command line / config.
class UsageError : public Error
{
public:
  using Error::Error;
};

}  // namespace gauge
