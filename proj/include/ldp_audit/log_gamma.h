/*
 * Copyright 2026 The LDP Audit Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef LDP_AUDIT_LOG_GAMMA_H_
#define LDP_AUDIT_LOG_GAMMA_H_

namespace ldp_audit {

// Natural log of the Gamma function for x > 0 (Lanczos, g = 7, n = 9).
// Throws std::domain_error for x <= 0.
double LogGamma(double x);

}  // namespace ldp_audit

#endif  // LDP_AUDIT_LOG_GAMMA_H_
