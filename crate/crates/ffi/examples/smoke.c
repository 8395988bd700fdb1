/* Parses a model, prints its equations and checks nilpotency. */
#include <stdio.h>
#include <string.h>

#include "kt.h"

static const char *BF2 =
    "base_dim 2\n"
    "field A even\n"
    "field B even antisym(1)\n"
    "lagrangian = A*sum(mu, nu: eps(mu, nu)*d(mu, B[nu]))\n"
    "stage 0 c0 = sum(nu: d(nu, B_bar[nu]))\n";

int main(void) {
    KtModel *model = NULL;
    if (kt_model_parse("base_dim 2\nlagrangian = d(3, y)", &model) != KT_STATUS_PARSE || model != NULL) {
        return 10;
    }
    printf("diagnostic: %s\n", kt_last_error());
    if (kt_model_parse(BF2, &model) != KT_STATUS_OK) {
        fprintf(stderr, "%s\n", kt_last_error());
        return 11;
    }
    char *el = NULL;
    if (kt_model_euler_lagrange(model, &el) != KT_STATUS_OK) {
        return 12;
    }
    fputs(el, stdout);
    kt_string_free(el);
    char *json = NULL;
    size_t failures = 99;
    if (kt_model_check_json(model, &json, &failures) != KT_STATUS_OK || failures != 0) {
        return 13;
    }
    if (strstr(json, "\"schema\": 1") == NULL) {
        return 14;
    }
    kt_string_free(json);
    kt_model_free(model);
    if (kt_bf_verify_json(9, 1, 0, &json, NULL) != KT_STATUS_INVALID) {
        return 15;
    }
    printf("version %s ok\n", kt_version());
    return 0;
}
