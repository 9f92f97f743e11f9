// Hand-sized CSVs in the exact layouts the sweep CLI writes.

export const RATES_CSV = [
  "snr_db,L_s,L_r,N_s,N_r,K,method,sum_rate",
  "-10.0,1.0,1.0,5,5,3,th,0.6465",
  "-10.0,1.0,1.0,5,5,3,mc,0.6500",
  "0.0,1.0,1.0,5,5,3,th,3.3346",
  "0.0,1.0,1.0,5,5,3,mc,3.3704",
  "10.0,1.0,1.0,5,5,3,th,8.1041",
  "10.0,1.0,1.0,5,5,3,mc,8.0549",
  "-10.0,1.0,1.0,80,80,3,th,3.6180",
  "-10.0,1.0,1.0,80,80,3,mc,3.6354",
  "0.0,1.0,1.0,80,80,3,th,9.2204",
  "0.0,1.0,1.0,80,80,3,mc,9.1932",
  "10.0,1.0,1.0,80,80,3,th,12.8866",
  "10.0,1.0,1.0,80,80,3,mc,12.9340",
].join("\n");

export const SWEEP_CSV = [
  "p_u,N_s,ee,is_opt",
  "0.001,81,1.8559,0",
  "0.001,150,1.8702,0",
  "0.001,265,1.8750,1",
  "0.001,320,1.8741,0",
  "0.01,81,1.8801,0",
  "0.01,123,1.8942,1",
  "0.01,265,1.8857,0",
  "0.01,320,1.8822,0",
  "1.0,81,1.8168,1",
  "1.0,123,1.8021,0",
  "1.0,265,1.7469,0",
  "1.0,320,1.7284,0",
].join("\n");

export const SURFACE_CSV = [
  "kind,N_s,N_r,ee",
  "grid,10,4,1.601",
  "grid,12,4,1.640",
  "grid,14,4,1.628",
  "grid,10,6,1.655",
  "grid,12,6,1.701",
  "grid,14,6,1.688",
  "grid_argmax,12,6,1.701",
  "analytic_opt,13,5,1.703",
].join("\n");
