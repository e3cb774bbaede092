int length(int *arr, int n) { return n; }
