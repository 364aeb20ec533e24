#pragma once

#include <string>

#include "chainforge/descriptor.hpp"

namespace chainforge {

json stability_report_to_json(const StabilityReport& rep);
// n,level,disc_order,psi_kernel_order rows
std::string stability_report_to_csv(const StabilityReport& rep);

// n,level,discriminant_order,kernel_order,mode rows
std::string plot_data_csv(const StabilityReport& rep);

json certificate_to_json(const WildCertificate& cert);
json tail_decision_to_json(const TailDecision& d);
json interleaving_result_to_json(const InterleavingResult& r);
json lenstra_result_to_json(const LenstraResult& r);

json core_report_to_json(const Group& parent, const Subgroup& sub,
                         const Subgroup& core);

}  // namespace chainforge
