// Bundled copy of the 30-case bench table, byte-identical to
// data/table2_cases.csv (a unit test holds the two together).

namespace wptlab::detail {

const char* table2_csv()
{
    return R"(case,rx_ports,tx_ports,eta_theo_pct,eta_meas_pct,error_pct,gain_setting_db,gain_corr_db,est_loss_db
1,1;2,7;8,83.29,79.72,4.29,10,9.51,7.54
2,1;2,8;9,68.91,71.24,3.38,11,10.46,7.51
3,1;2,9;10,45.63,46.61,2.15,14,13.31,6.68
4,2;3,7;8,63.31,66.01,4.26,11,10.46,6.85
5,2;3,9;10,43.40,46.49,7.12,15,14.26,7.61
6,2;3,10;11,48.62,50.05,2.94,14,13.31,7.30
7,1;2,7;9,63.02,62.82,0.31,12,11.41,7.37
8,1;2,8;10,69.79,70.66,1.24,12,11.41,8.39
9,1;2,7;11,56.18,58.25,3.68,13,12.36,7.67
10,1;3,8;10,72.68,69.56,4.30,11,10.46,7.31
11,1;3,8;9,72.87,73.20,0.46,10,9.51,6.80
12,1;4,8;10,78.13,78.64,0.65,10,9.51,7.42
13,1;4,10;12,51.13,53.64,4.91,13,12.36,6.95
14,3;4,9;10,46.10,48.12,4.39,13,12.36,6.01
15,3;4,8;9,45.96,46.47,1.12,14,13.31,6.65
16,3;4,7;8,50.14,51.70,3.11,14,13.31,7.58
17,3;4,7;9,52.38,51.56,1.57,15,14.26,8.51
18,3;4,7;10,49.91,51.71,3.61,12,11.41,5.68
19,3;4,10;12,52.71,50.71,3.80,14,13.31,7.41
20,2;3,7;9,72.29,70.83,2.02,11,10.46,7.46
21,2;3,7;10,64.09,66.78,4.19,12,11.41,7.90
22,2;3,8;10,51.76,53.49,3.35,14,13.31,7.88
23,2;3,7;11,64.45,60.86,5.57,13,12.36,8.05
24,2;4,7;10,73.95,73.55,0.54,11,10.46,7.79
25,2;4,8;11,59.80,62.31,4.20,12,11.41,7.30
26,1;6,10;11,72.44,71.19,1.73,11,10.46,7.51
27,1;6,8;9,69.93,72.65,3.90,10,9.51,6.73
28,1;6,7;12,58.83,57.24,2.70,13,12.36,7.51
29,2;5,7;8,53.98,58.83,8.99,13,12.36,7.75
30,2;5,11;12,60.11,57.33,4.62,12,11.41,6.58
)";
}

} // namespace wptlab::detail
