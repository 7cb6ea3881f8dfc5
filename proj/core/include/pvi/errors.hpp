#ifndef PVI_ERRORS_HPP
#define PVI_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace pvi
{

/// Base class of every error raised by the library.
///
/// Each concrete error carries a stable short name (e.g. "NearLattice") which the
/// command line front end embeds in its diagnostics.
class Error : public std::runtime_error
{
public:
    Error(std::string name, const std::string &what)
        : std::runtime_error(name + ": " + what), m_name(std::move(name))
    {}
    const std::string &name() const noexcept
    {
        return m_name;
    }

private:
    std::string m_name;
};

#define PVI_DECLARE_ERROR(Type)                                                                    \
    class Type : public Error                                                                      \
    {                                                                                              \
    public:                                                                                        \
        explicit Type(const std::string &what) : Error(#Type, what) {}                             \
    }

// Im(tau) <= 0 and similar violations of the upper half-plane.
PVI_DECLARE_ERROR(DomainError);
// z within the singular tolerance of the period lattice.
PVI_DECLARE_ERROR(NearSingular);
// r + s*tau within the singular tolerance of the period lattice.
PVI_DECLARE_ERROR(NearLattice);
// (r, s) in the half-period set (1/2)Z^2.
PVI_DECLARE_ERROR(Degenerate);
// Pole test could not decide at the requested tolerance.
PVI_DECLARE_ERROR(Inconclusive);
// A contour sample came too close to a zero.
PVI_DECLARE_ERROR(BoundaryTooClose);
// Accumulated phase is not close to an integer multiple of 2*pi.
PVI_DECLARE_ERROR(IncoherentWinding);
PVI_DECLARE_ERROR(NewtonStall);
PVI_DECLARE_ERROR(DepthExceeded);
PVI_DECLARE_ERROR(InternalError);
PVI_DECLARE_ERROR(InvalidArgument);

#undef PVI_DECLARE_ERROR

} // namespace pvi

#endif
