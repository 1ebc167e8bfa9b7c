# qcong: exact verification of q-supercongruences and their proof chains
