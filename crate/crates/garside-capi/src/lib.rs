//! C ABI for the garside engine. See `include/garside.h` once built.
