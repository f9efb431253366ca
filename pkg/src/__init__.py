# Tool_fermiwit - Entanglement witnesses for three fermions in a Fermi gas
