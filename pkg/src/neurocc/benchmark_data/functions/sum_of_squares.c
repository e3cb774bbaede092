int sum_of_squares(int *arr, int n) {
  int r = 0;
  for (int i = 0; i < n; ++i) {
    r += arr[i] * arr[i];
  }
  return r;
}
