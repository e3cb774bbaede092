int array_prod(int *arr, int n) {
  int r = 1;
  for (int i = 0; i < n; ++i) {
    r *= arr[i];
  }
  return r;
}
