#include "opvol/errors.hpp"

#include <exception>
#include <sstream>

namespace opvol {

NotPositiveSemidefinite::NotPositiveSemidefinite(double eigenvalue, double tolerance)
    : Error([&] {
        std::ostringstream os;
        os.precision(17);
        os << "operator is not positive semidefinite: eigenvalue " << eigenvalue
           << " below tolerance -" << tolerance;
        return os.str();
      }()),
      eigenvalue_(eigenvalue),
      tolerance_(tolerance) {}

NotPositiveSemidefinite::NotPositiveSemidefinite(double eigenvalue, double tolerance, const std::string& message)
    : Error(message), eigenvalue_(eigenvalue), tolerance_(tolerance) {}

NotNormal::NotNormal(double defect)
    : Error([&] {
        std::ostringstream os;
        os.precision(17);
        os << "generator operator C is not normal: ||CC* - C*C||_HS = " << defect;
        return os.str();
      }()),
      defect_(defect) {}

NotNormal::NotNormal(double defect, const std::string& message) : Error(message), defect_(defect) {}

void rethrow_with_context(const std::string& context) {
  try {
    throw;
  } catch (const NotPositiveSemidefinite& e) {
    throw NotPositiveSemidefinite(e.eigenvalue(), e.tolerance(), context + ": " + e.what());
  } catch (const NotNormal& e) {
    throw NotNormal(e.defect(), context + ": " + e.what());
  } catch (const ConfigError& e) {
    throw ConfigError(context + ": " + e.what());
  } catch (const InvalidMoments& e) {
    throw InvalidMoments(context + ": " + e.what());
  } catch (const IoError& e) {
    throw IoError(context + ": " + e.what());
  } catch (const InternalError& e) {
    throw InternalError(context + ": " + e.what());
  } catch (const std::exception& e) {
    throw InternalError(context + ": " + e.what());
  }
}

}  // namespace opvol
