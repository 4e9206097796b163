/* Plain C client of the shared library. */
#include <math.h>
#include <stdio.h>
#include <string.h>

#include "sigmaevo/sigmaevo.h"

static int failures = 0;

#define EXPECT(cond)                                              \
  do {                                                            \
    if (!(cond)) {                                                \
      fprintf(stderr, "%s:%d: failed: %s\n", __FILE__, __LINE__, #cond); \
      ++failures;                                                 \
    }                                                             \
  } while (0)

int main(void) {
  EXPECT(strcmp(sevo_version(), "0.3.0") == 0);

  sevo_params p = sevo_default_params();
  p.sigma = 1.0;
  sevo_model* model = NULL;
  EXPECT(sevo_model_create(&p, &model) == SEVO_OK);

  /* roots of l^3 + l^2 + (1 + a^2) l + a^2 at a = |xi|^sigma = 2 */
  double re[3], im[3];
  EXPECT(sevo_eigenvalues(model, 2.0, re, im) == SEVO_OK);
  double sr = 0, si = 0;
  for (int k = 0; k < 3; ++k) { sr += re[k]; si += im[k]; }
  EXPECT(fabs(sr + 1.0) < 1e-12 && fabs(si) < 1e-12);
  double pr = re[0] * re[1] - im[0] * im[1], pi = re[0] * im[1] + im[0] * re[1];
  double prod_re = pr * re[2] - pi * im[2], prod_im = pr * im[2] + pi * re[2];
  EXPECT(fabs(prod_re + 4.0) < 1e-12 && fabs(prod_im) < 1e-12);

  /* propagation: identity at t = 0, semigroup in t */
  double s0[8] = {1, 0, 0.5, -0.25, -0.3, 0, 0.2, 0.1}, s1[8], s2[8], s3[8];
  EXPECT(sevo_propagate_mode(model, 0.7, s0, 0.0, s1) == SEVO_OK);
  for (int k = 0; k < 8; ++k) EXPECT(fabs(s1[k] - s0[k]) < 1e-13);
  EXPECT(sevo_propagate_mode(model, 0.7, s0, 1.5, s1) == SEVO_OK);
  EXPECT(sevo_propagate_mode(model, 0.7, s1, 2.5, s2) == SEVO_OK);
  EXPECT(sevo_propagate_mode(model, 0.7, s0, 4.0, s3) == SEVO_OK);
  for (int k = 0; k < 8; ++k) EXPECT(fabs(s2[k] - s3[k]) < 1e-12);
  EXPECT(sevo_propagate_mode(model, 0.7, NULL, 1.0, s1) == SEVO_INVALID_ARGUMENT);
  sevo_model_destroy(model);

  sevo_params bad = sevo_default_params();
  bad.sigma = 0.5;
  model = NULL;
  EXPECT(sevo_model_create(&bad, &model) != SEVO_OK);
  EXPECT(model == NULL);
  EXPECT(strlen(sevo_last_error()) > 0);

  double pc = 0;
  EXPECT(sevo_p_crit(1, 1.0, 2.0, &pc) == SEVO_OK && pc == 5.0);
  EXPECT(sevo_p_crit(1, 3.0, 2.0, &pc) != SEVO_OK);

  sevo_result* r = NULL;
  EXPECT(sevo_run("pcrit", "{\"sigma\": 2, \"n\": 1}", NULL, 0, &r) == SEVO_OK);
  EXPECT(r != NULL && sevo_result_exit_code(r) == 0);
  EXPECT(r != NULL && strstr(sevo_result_summary(r), "\"p_crit\": 5.0") != NULL);
  EXPECT(r != NULL && strstr(sevo_result_manifest(r), "\"version\": \"0.3.0\"") != NULL);
  sevo_result_destroy(r);

  r = NULL;
  EXPECT(sevo_run("eigen", "{\"sigma\": 0}", NULL, 0, &r) == SEVO_CONFIG);
  EXPECT(r != NULL && sevo_result_exit_code(r) == 1);
  sevo_result_destroy(r);

  r = NULL;
  EXPECT(sevo_run("frobnicate", "{}", NULL, 0, &r) == SEVO_INVALID_ARGUMENT);
  EXPECT(r == NULL);
  EXPECT(strcmp(sevo_status_string(SEVO_NUMERIC), "numeric failure") == 0);

  if (failures) fprintf(stderr, "%d failure(s)\n", failures);
  else printf("capi: all checks passed\n");
  return failures ? 1 : 0;
}
