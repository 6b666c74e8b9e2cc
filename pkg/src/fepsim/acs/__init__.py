"""Software twin of a low-force active sidestick: per-axis force-feel
dynamics, feel-characteristic curves, operating modes, the ID-numbered wire
protocol, and the release-transient parameter-identification fitter."""
