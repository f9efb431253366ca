# Tests for Tool_fermiwit
