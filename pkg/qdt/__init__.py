# Kuantum karar teorisi sayısal motoru ve senaryo simülatörü
