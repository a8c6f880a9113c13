# drinfeld-lab package
