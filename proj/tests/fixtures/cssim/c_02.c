// min
#include <stdio.h>

int main(void) {
    int n;
    long long values[100];
    if (scanf("%d", &n) != 1) return 1;
    for (int i = 0; i < n; i++) scanf("%lld", &values[i]);
    long long result = values[0];
    for (int i = 1; i < n; i++)
        if (values[i] < result) result = values[i];
    printf("%lld\n", result);
    return 0;
}
