#include <math.h>
#include <stdio.h>
#include <string.h>
#include "steerage.h"

int main(void) {
    SteerageState *s = NULL;
    if (steerage_state_from_json("{\"werner\": {\"p\": 0.6}}", &s) != STEERAGE_STATUS_OK) return 1;
    double value, est;
    uint32_t dim;
    if (steerage_quantity(s, STEERAGE_DIRECTION_ALICE_TO_BOB, 0, &value, &dim, &est) != STEERAGE_STATUS_OK) return 2;
    if (fabs(value - 1.2) > 1e-9 || dim != 3) return 3;
    char *json = NULL;
    if (steerage_analyze_json(s, -2, &json) != STEERAGE_STATUS_OK) return 4;
    if (strstr(json, "\"steerable\"") == NULL) return 5;
    steerage_string_free(json);
    steerage_state_free(s);
    SteerageState *bad = NULL;
    if (steerage_state_from_json("{\"bell_diagonal\": [1, 1, 1]}", &bad) != STEERAGE_STATUS_INVALID_STATE) return 6;
    if (steerage_last_error_message() == NULL || bad != NULL) return 7;
    printf("%s ok\n", steerage_version());
    return 0;
}
