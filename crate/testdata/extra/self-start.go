// main starts a copy of itself before blocking; the reduction never ends.
// expected: inconclusive
package main

var ch = make(chan int)

func main() {
	go main()
	<-ch
}
