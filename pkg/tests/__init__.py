# Test suite for drinfeld_lab
