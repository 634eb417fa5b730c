version = '0.1.0'
time = '2026-10-18 10:00:00'
